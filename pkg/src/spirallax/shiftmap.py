"""The shift map on twisted spirals, geometrically and in closed form.

Shifting the seed one vertex forward changes the canonical lift: the
shifted lift equals the original one times powers of two scale factors
alpha, beta that recur with period three along the spiral. The branch
depends on n mod 3:

    n = 3s + 2:  alpha^2 beta  = c_n,        alpha beta^2 = A_1 / (A_3 A_0)
    n = 3s:      alpha / beta  = c_n,        alpha^2 beta = A_1 / (A_3 A_0)

Both pairs pin alpha and beta via real cube roots. The closed-form shift
multiplies each chart entry by the ratio of lift factors and re-indexes,
so that the map is a self-map of the chart; the geometric route (shift the
seed, re-lift, re-extract) is the independent oracle for all of it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coords import Coords, DerivedInv, check_genericity, derive, _gdiv
from .errors import GenericityViolation, IllConditioned, IndexOutOfRange
from .lift import LiftedSpiral, canonical_lift
from .projgeo import real_cbrt
from .spiral import Seed
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class AlphaBeta:
    """Scale factors relating the canonical lifts of a spiral and its shift."""

    alpha: float
    beta: float
    branch: int  # n % 3, either 0 or 2


def alpha_beta(coords: Coords, derived: DerivedInv | None = None, tol: Tolerances = DEFAULT) -> AlphaBeta:
    """Solve the defining equations of the branch for alpha and beta."""
    if derived is None:
        derived = derive(coords)
    branch = coords.n % 3
    if branch == 1:
        raise IndexOutOfRange("no shift factors for n % 3 == 1")
    c_n = coords.c_n
    q = _gdiv(derived.A[1], derived.A[3] * derived.A[0], "alpha_beta")
    if branch == 2:
        alpha = real_cbrt(c_n * c_n / q)
        beta = real_cbrt(q * q / c_n)
        res = max(
            abs(alpha * alpha * beta - c_n) / max(abs(c_n), 1e-300),
            abs(alpha * beta * beta - q) / max(abs(q), 1e-300),
        )
    else:
        alpha = real_cbrt(c_n * q)
        beta = alpha / c_n
        res = max(
            abs(alpha / beta - c_n) / max(abs(c_n), 1e-300),
            abs(alpha * alpha * beta - q) / max(abs(q), 1e-300),
        )
    if res > 1e-12:
        raise IllConditioned(f"alpha/beta defining equations violated by {res:.2e}")
    return AlphaBeta(alpha=alpha, beta=beta, branch=branch)


# ---------------------------------------------------------------------------
# the exponent schedule of the lift factors


@dataclass(frozen=True)
class ExpSchedule:
    """Exponent pairs (r_i, s_i) with S(V_i) = alpha^{r_i} beta^{s_i} V_{i+1}.

    Equivalently, the shifted canonical lift satisfies
    Vhat_j = alpha^r beta^s V_j with (r, s) = sigma_exponents(j). The pairs
    recur with period three apart from the exceptional indices 0, n+3, n+4.
    """

    n: int

    def sigma_exponents(self, j: int):
        n = self.n
        if not 0 <= j <= n + 4:
            raise IndexOutOfRange(f"lift factor undefined at index {j}")
        if j == 0:
            return (-1, -1)
        if n % 3 == 2:
            if j == n + 3:
                return (-1, -1)
            if j == n + 4:
                return (1, 0)
            return {1: (-1, -1), 2: (1, 0), 0: (0, 1)}[j % 3]
        if j == n + 3:
            return (0, 1)
        if j == n + 4:
            return (-1, -1)
        return {1: (0, 1), 2: (-1, -1), 0: (1, 0)}[j % 3]

    def __call__(self, i: int):
        """(r_i, s_i) for S(V_i) = alpha^{r_i} beta^{s_i} V_{i+1}."""
        return self.sigma_exponents(i + 1)


def exp_schedule(n: int) -> ExpSchedule:
    if n % 3 == 1:
        raise IndexOutOfRange("no schedule for n % 3 == 1")
    return ExpSchedule(n=n)


def _sigma(ab: AlphaBeta, sched: ExpSchedule, j: int) -> float:
    r, s = sched.sigma_exponents(j)
    return ab.alpha**r * ab.beta**s


# ---------------------------------------------------------------------------
# shift map in coordinates


def shift_coords(coords: Coords, tol: Tolerances = DEFAULT) -> Coords:
    """Closed-form shift: hatted invariants re-indexed to the standard chart.

    ahat_k = a_k sigma(k+3)/sigma(k+2) and bhat_k = b_k sigma(k+3)/sigma(k+1)
    for k = 1..n, chat_{n+1} = c_{n+1} sigma(n+4)/sigma(n+1); the output
    chart is a'_k = ahat_{k+1}, b'_k = bhat_{k+1}, c'_n = chat_{n+1}.
    """
    n = coords.n
    derived = derive(coords, tol)
    ab = alpha_beta(coords, derived, tol)
    sched = exp_schedule(n)

    def sig(j):
        return _sigma(ab, sched, j)

    a_ext = np.concatenate([coords.a, [derived.a_n]])
    b_ext = np.concatenate([coords.b, [derived.b_n]])
    a_new = np.empty(n)
    b_new = np.empty(n)
    for k in range(1, n + 1):
        a_new[k - 1] = a_ext[k] * sig(k + 3) / sig(k + 2)
        b_new[k - 1] = b_ext[k] * sig(k + 3) / sig(k + 1)
    c_new = derived.c_n1 * sig(n + 4) / sig(n + 1)
    out = Coords(n=n, a=a_new, b=b_new, c_n=float(c_new))
    check_genericity(out)
    return out


def shift_orbit(coords: Coords, steps: int, tol: Tolerances = DEFAULT):
    """coords, S(coords), ..., S^steps(coords)."""
    orbit = [coords]
    for _ in range(steps):
        orbit.append(shift_coords(orbit[-1], tol))
    return orbit


# ---------------------------------------------------------------------------
# geometric shift


def geometric_shift(seed: Seed, tol: Tolerances = DEFAULT) -> Seed:
    """New seed {p_2, ..., p_n, M T(p_0); M T(p_1)} with the same monodromy,
    computed on the canonical lift window and projected back."""
    ls = canonical_lift(seed, tol)
    return shifted_seed_from_lift(ls)


def shifted_seed_from_lift(ls: LiftedSpiral) -> Seed:
    n = ls.n
    return Seed(
        n=n,
        points=tuple(ls[i].copy() for i in range(2, n + 2)),
        side_point=ls[n + 2].copy(),
        monodromy=ls.monodromy.copy(),
    )


def measured_lift_ratio(ls: LiftedSpiral, ls_shifted: LiftedSpiral, i: int) -> float:
    """Componentwise ratio Vhat_i / V_i measured on the dominant component.

    `ls_shifted` must be the canonical lift of the shifted seed; its own
    window index j corresponds to original index i = j + 1.
    """
    v = ls[i]
    vhat = ls_shifted[i - 1]
    k = int(np.argmax(np.abs(v)))
    return float(vhat[k] / v[k])


# ---------------------------------------------------------------------------
# scaling action and equivariance


def scaling_action(coords: Coords, mu: float) -> Coords:
    """One-parameter action a_k -> mu a_k, b_k -> b_k / mu, c_n fixed."""
    if mu == 0.0:
        raise GenericityViolation("scaling parameter must be nonzero")
    return Coords(n=coords.n, a=mu * coords.a, b=coords.b / mu, c_n=coords.c_n)


def verify_equivariance(coords: Coords, mu: float, tol: Tolerances = DEFAULT) -> dict:
    """Componentwise check that shifting commutes with the scaling action."""
    lhs = shift_coords(scaling_action(coords, mu), tol).as_vector()
    rhs = scaling_action(shift_coords(coords, tol), mu).as_vector()
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    max_dev = float(np.max(np.abs(lhs - rhs) / scale))
    return {
        "check": "shift_scaling_equivariance",
        "max_dev": max_dev,
        "pass": bool(max_dev <= tol.shift),
    }


def verify_shift_commutation(seed: Seed, tol: Tolerances = DEFAULT) -> dict:
    """Closed-form shift vs. the geometric route, on one seed."""
    from .coords import extract_coords

    base = extract_coords(canonical_lift(seed, tol), tol)
    lhs = shift_coords(base, tol).as_vector()
    rhs = extract_coords(canonical_lift(geometric_shift(seed, tol), tol), tol).as_vector()
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    max_dev = float(np.max(np.abs(lhs - rhs) / scale))
    return {
        "check": "shift_commutation",
        "max_dev": max_dev,
        "pass": bool(max_dev <= tol.shift),
    }
