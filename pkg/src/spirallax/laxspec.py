"""Laurent-polynomial Lax matrices and the spectral invariants of the shift.

Introducing the scaling parameter into the transfer matrices,

    K_i(mu) = [[0, 0, c_i], [1, 0, b_i / mu], [0, 1, mu a_i]],

the product M(mu) = K_0(mu) ... K_n(mu) A1(mu)^{-1} K_{-1}(mu) is a matrix
of Laurent polynomials whose characteristic coefficients are conserved by
the shift map. A1(mu) is the local gauge matrix at the start of the seed
with every invariant carrying its scaling weight (a's weight +1, b's -1,
c's and d's 0); its determinant is the mu-free constant A_0 A_1, so the
inverse is adjugate over an exact scalar division.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .coords import (
    Coords,
    DerivedInv,
    derive,
    gauge_A,
    inv_a,
    inv_b,
    inv_c,
    inv_d,
    k_matrix,
)
from .errors import IllConditioned, IndexOutOfRange, NonDivisible
from .shiftmap import AlphaBeta, ExpSchedule, _sigma, alpha_beta, exp_schedule, shift_coords, shift_orbit
from .tolerances import DEFAULT, Tolerances


# ---------------------------------------------------------------------------
# Laurent polynomials in one variable


class LaurentPoly:
    """Finite-support map exponent -> real coefficient."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = dict(coeffs) if coeffs else {}

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def const(x: float) -> "LaurentPoly":
        return LaurentPoly({0: float(x)}) if x else LaurentPoly()

    @staticmethod
    def term(coeff: float, exp: int) -> "LaurentPoly":
        return LaurentPoly({int(exp): float(coeff)}) if coeff else LaurentPoly()

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0.0) + v
        return LaurentPoly({e: v for e, v in out.items() if v != 0.0})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self.c.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                out[e] = out.get(e, 0.0) + v1 * v2
        return LaurentPoly({e: v for e, v in out.items() if v != 0.0})

    def scale(self, x: float) -> "LaurentPoly":
        return LaurentPoly({e: x * v for e, v in self.c.items()}) if x else LaurentPoly()

    def max_abs(self) -> float:
        return max((abs(v) for v in self.c.values()), default=0.0)

    def trimmed(self, rel_eps: float) -> "LaurentPoly":
        m = self.max_abs()
        if m == 0.0:
            return LaurentPoly()
        return LaurentPoly({e: v for e, v in self.c.items() if abs(v) > rel_eps * m})

    def evaluate(self, mu: float) -> float:
        return float(sum(v * mu**e for e, v in self.c.items()))

    def support(self):
        return sorted(self.c)

    def is_zero(self) -> bool:
        return not self.c

    def exact_div(self, divisor: "LaurentPoly", tol: Tolerances = DEFAULT) -> "LaurentPoly":
        """Division that must leave no remainder (up to trim tolerance)."""
        if divisor.is_zero():
            raise NonDivisible("division by the zero polynomial")
        if len(divisor.c) == 1:
            ((e0, v0),) = divisor.c.items()
            return LaurentPoly({e - e0: v / v0 for e, v in self.c.items()})
        if self.is_zero():
            return LaurentPoly()
        # shift both to ordinary polynomials and long-divide, high to low
        num_lo = min(self.c)
        den_lo = min(divisor.c)
        num = dict(self.c)
        den_deg = max(divisor.c) - den_lo
        den = {e - den_lo: v for e, v in divisor.c.items()}
        lead = den[den_deg]
        quot: dict = {}
        scale = self.max_abs()
        work = {e - num_lo: v for e, v in num.items()}
        guard = len(work) + den_deg + 8
        for _ in range(guard):
            if not work:
                break
            top = max(work)
            if top < den_deg:
                break
            q = work[top] / lead
            qe = top - den_deg
            quot[qe] = quot.get(qe, 0.0) + q
            for e, v in den.items():
                t = e + qe
                work[t] = work.get(t, 0.0) - q * v
                if abs(work.get(t, 0.0)) <= 1e-300:
                    work.pop(t, None)
        rem = max((abs(v) for v in work.values()), default=0.0)
        if rem > tol.trim * max(scale, 1e-300) * 10.0:
            raise NonDivisible(f"division remainder {rem:.3e} above tolerance")
        return LaurentPoly({e + num_lo - den_lo: v for e, v in quot.items()})


# ---------------------------------------------------------------------------
# 3x3 matrices of Laurent polynomials


def lmat_from_floats(m: np.ndarray) -> list:
    return [[LaurentPoly.const(float(m[i, j])) for j in range(3)] for i in range(3)]


def lmat_mul(a, b):
    out = [[LaurentPoly() for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            acc = LaurentPoly()
            for k in range(3):
                acc = acc + a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def lmat_eval(a, mu: float) -> np.ndarray:
    return np.array([[a[i][j].evaluate(mu) for j in range(3)] for i in range(3)])


def lmat_trace(a) -> LaurentPoly:
    return a[0][0] + a[1][1] + a[2][2]


def _minor(a, rows, cols) -> LaurentPoly:
    (r0, r1), (c0, c1) = rows, cols
    return a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]


def lmat_det(a) -> LaurentPoly:
    return (
        a[0][0] * _minor(a, (1, 2), (1, 2))
        - a[0][1] * _minor(a, (1, 2), (0, 2))
        + a[0][2] * _minor(a, (1, 2), (0, 1))
    )


def lmat_sigma2(a) -> LaurentPoly:
    """Sum of the principal 2x2 minors."""
    return (
        _minor(a, (1, 2), (1, 2)) + _minor(a, (0, 2), (0, 2)) + _minor(a, (0, 1), (0, 1))
    )


def lmat_adjugate(a):
    idx = [(1, 2), (0, 2), (0, 1)]
    out = [[LaurentPoly() for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sign = -1.0 if (i + j) % 2 else 1.0
            out[j][i] = _minor(a, idx[i], idx[j]).scale(sign)  # transpose of cofactors
    return out


def lmat_scale_entrywise(a, factor: LaurentPoly):
    return [[a[i][j] * factor for j in range(3)] for i in range(3)]


# ---------------------------------------------------------------------------
# scaled transfer and gauge matrices


def K_mu(i: int, coords: Coords, derived: DerivedInv | None = None, scaled: bool = True):
    """Transfer matrix at index i with the scaling weights in the last column."""
    if derived is None:
        derived = derive(coords)
    a_i = inv_a(coords, derived, i)
    b_i = inv_b(coords, derived, i)
    c_i = inv_c(coords, derived, i)
    one = LaurentPoly.const(1.0)
    zero = LaurentPoly.zero()
    da, db = (1, -1) if scaled else (0, 0)
    return [
        [zero, zero, LaurentPoly.const(c_i)],
        [one, zero, LaurentPoly.term(b_i, db)],
        [zero, one, LaurentPoly.term(a_i, da)],
    ]


def A1_mu(coords: Coords, derived: DerivedInv | None = None):
    """The start-of-seed gauge matrix with scaling weights on every entry."""
    if derived is None:
        derived = derive(coords)

    def stub(j):
        return [
            LaurentPoly.const(inv_c(coords, derived, j)),
            LaurentPoly.zero(),
            LaurentPoly.term(inv_a(coords, derived, j), 1),
        ]

    def apply(mat, vec):
        return [
            mat[r][0] * vec[0] + mat[r][1] * vec[1] + mat[r][2] * vec[2]
            for r in range(3)
        ]

    k_m1 = K_mu(-1, coords, derived, scaled=True)
    k_0 = K_mu(0, coords, derived, scaled=True)
    col1 = [p.scale(inv_d(coords, derived, -1)) for p in stub(-1)]
    col2 = [p.scale(inv_d(coords, derived, 0)) for p in apply(k_m1, stub(0))]
    col3 = [p.scale(inv_d(coords, derived, 1)) for p in apply(lmat_mul(k_m1, k_0), stub(1))]
    return [[col1[r], col2[r], col3[r]] for r in range(3)]


def R_mat(i: int, ab: AlphaBeta, sched: ExpSchedule) -> np.ndarray:
    """Diagonal gauge of lift factors diag(sigma(i+1), sigma(i+2), sigma(i+3));
    mu-free because alpha and beta are scaling invariants."""
    return np.diag([_sigma(ab, sched, i + 1), _sigma(ab, sched, i + 2), _sigma(ab, sched, i + 3)])


# ---------------------------------------------------------------------------
# Lax compatibility


def verify_lax(coords: Coords, mus=(1.0,), tol: Tolerances = DEFAULT) -> dict:
    """Residuals of S(K_i) = N_i^{-1} K_i N_{i+1} for i = 0..n-1 at each mu.

    Both sides reduce to S(K_i)(mu) = R_i^{-1} K_{i+1}(mu) R_{i+1}; the
    residual is measured on the de-weighted last column plus the fixed 0/1
    pattern, so the profile should not depend on mu.
    """
    n = coords.n
    derived = derive(coords)
    ab = alpha_beta(coords, derived, tol)
    sched = exp_schedule(n)
    shifted = shift_coords(coords, tol)
    per_mu = {}
    worst = 0.0
    worst_at = None
    for mu in mus:
        residuals = []
        for i in range(n):
            # left side: hatted invariants, c-hat at index i+1 <= n equals 1
            lhs = k_matrix(shifted.a[i], shifted.b[i], 1.0)
            k_next = lmat_eval(K_mu(i + 1, coords, derived, scaled=True), mu)
            r_i = R_mat(i, ab, sched)
            r_next = R_mat(i + 1, ab, sched)
            rhs = np.diag(1.0 / np.diag(r_i)) @ k_next @ r_next
            rhs_base = rhs.copy()
            rhs_base[1, 2] = rhs[1, 2] * mu
            rhs_base[2, 2] = rhs[2, 2] / mu
            dev = np.abs(lhs - rhs_base) / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs_base)))
            res = float(np.max(dev))
            residuals.append(res)
            if res > worst:
                worst, worst_at = res, (i, mu)
        per_mu[mu] = residuals
    profiles = list(per_mu.values())
    profile_dev = 0.0
    for p in profiles[1:]:
        profile_dev = max(profile_dev, float(np.max(np.abs(np.array(p) - np.array(profiles[0])))))
    return {
        "check": "lax_compatibility",
        "max_dev": worst,
        "worst_at": worst_at,
        "profile_dev": profile_dev,
        "pass": bool(worst <= tol.shift),
    }


# ---------------------------------------------------------------------------
# the spectral-parameter monodromy and its characteristic table


def monodromy_mu(coords: Coords, derived: DerivedInv | None = None, tol: Tolerances = DEFAULT):
    """M(mu) = K_0(mu) ... K_n(mu) A1(mu)^{-1} K_{-1}(mu) over the Laurent ring."""
    if derived is None:
        derived = derive(coords)
    n = coords.n
    prod = K_mu(0, coords, derived)
    for i in range(1, n + 1):
        prod = lmat_mul(prod, K_mu(i, coords, derived))
    a1 = A1_mu(coords, derived)
    det_a1 = lmat_det(a1).trimmed(tol.trim)
    if det_a1.is_zero():
        raise NonDivisible("gauge matrix determinant vanished")
    raw = lmat_mul(lmat_mul(prod, lmat_adjugate(a1)), K_mu(-1, coords, derived))
    out = [[raw[i][j].exact_div(det_a1, tol).trimmed(tol.trim) for j in range(3)] for i in range(3)]
    return out


@dataclass
class SpectralTable:
    """Coefficients of det(M(mu) - r I) as a table (mu_pow, r_pow) -> value."""

    entries: dict  # (mu_pow, r_pow) -> float

    def support(self):
        return sorted(self.entries)

    def support_for_r(self, r_pow: int):
        return sorted(j for (j, k) in self.entries if k == r_pow)

    def coeff(self, mu_pow: int, r_pow: int) -> float:
        return self.entries.get((mu_pow, r_pow), 0.0)

    def block_max(self, r_pow: int) -> float:
        return max(
            (abs(v) for (j, k), v in self.entries.items() if k == r_pow), default=0.0
        )

    def to_json(self) -> dict:
        items = sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        return {
            "entries": [
                {"mu_pow": int(j), "r_pow": int(k), "coeff": float(v)}
                for (j, k), v in items
            ]
        }

    @staticmethod
    def from_json(obj: dict) -> "SpectralTable":
        return SpectralTable(
            entries={
                (int(e["mu_pow"]), int(e["r_pow"])): float(e["coeff"])
                for e in obj["entries"]
            }
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def spectral_table(coords: Coords, tol: Tolerances = DEFAULT) -> SpectralTable:
    """det(M(mu) - r I) = -r^3 + tr r^2 - sigma2 r + det, each a Laurent
    polynomial in mu, stored raw (monic term -r^3).

    The determinant block is mu-free by multiplicativity (every factor of
    M(mu) has a mu-free determinant), so it is computed as the product of
    factor determinants; the direct Laurent determinant of the product,
    which accumulates cancellation noise, is only checked against it.
    """
    derived = derive(coords)
    m = monodromy_mu(coords, derived, tol)
    det_factors = (
        coords.c_n
        * derived.c_m1
        / (derived.A[0] * derived.A[1])
    )
    # the direct Laurent determinant accumulates cancellation noise, so the
    # mu-freeness check samples evaluations; the error bound follows the
    # cofactor-expansion magnitude (cancellation-aware)
    for mu in (0.7, 1.0, 1.6):
        ev = lmat_eval(m, mu)
        det = float(np.linalg.det(ev))
        ab = np.abs(ev)
        scale = float(
            ab[0, 0] * (ab[1, 1] * ab[2, 2] + ab[1, 2] * ab[2, 1])
            + ab[0, 1] * (ab[1, 0] * ab[2, 2] + ab[1, 2] * ab[2, 0])
            + ab[0, 2] * (ab[1, 0] * ab[2, 1] + ab[1, 1] * ab[2, 0])
        )
        bound = tol.spec * max(1.0, abs(det_factors)) + 1e-13 * scale
        if abs(det - det_factors) > bound:
            raise IllConditioned(
                f"determinant block deviates from multiplicativity by "
                f"{abs(det - det_factors):.3e} at mu = {mu}"
            )
    blocks = {
        3: LaurentPoly.const(-1.0),
        2: lmat_trace(m),
        1: lmat_sigma2(m).scale(-1.0),
        0: LaurentPoly.const(det_factors),
    }
    entries = {}
    for k, poly in blocks.items():
        poly = poly.trimmed(tol.trim)
        for j, v in poly.c.items():
            entries[(j, k)] = v
    return SpectralTable(entries=entries)


def compare_tables(base: SpectralTable, other: SpectralTable, tol: Tolerances = DEFAULT):
    """(max relative deviation, support mismatch list).

    Deviations run over the union of supports, normalized by the base
    table's per-r-degree block maximum. A one-sided entry counts as a
    support mismatch only when it is significant at the comparison
    tolerance; entries hovering at the trim threshold are value-compared
    like everything else.
    """
    mismatches = []
    for (j, k) in sorted(set(base.entries) ^ set(other.entries)):
        v = base.coeff(j, k) or other.coeff(j, k)
        ref = max(base.block_max(k), other.block_max(k), 1e-300)
        if abs(v) > tol.spec * ref:
            mismatches.append((j, k))
    max_dev = 0.0
    for (j, k) in set(base.entries) | set(other.entries):
        ref = base.block_max(k)
        if ref == 0.0:
            continue
        dev = abs(other.coeff(j, k) - base.coeff(j, k)) / ref
        max_dev = max(max_dev, dev)
    return max_dev, mismatches


def trace_support_mod3(table: SpectralTable):
    """Residues mod 3 of the mu-support of the trace block (r^2)."""
    return sorted({j % 3 for j in table.support_for_r(2)})


def verify_spectral_invariance(coords: Coords, steps: int, tol: Tolerances = DEFAULT) -> dict:
    """Spectral table along the shift orbit: identical support, matching
    values within tol.spec, and the trace block supported in one residue
    class mod 3."""
    orbit = shift_orbit(coords, steps, tol)
    base = spectral_table(orbit[0], tol)
    max_dev = 0.0
    first_fail = None
    support_ok = True
    for step, c in enumerate(orbit[1:], start=1):
        t = spectral_table(c, tol)
        dev, mismatches = compare_tables(base, t, tol)
        if mismatches:
            support_ok = False
            if first_fail is None:
                first_fail = {"step": step, "support_mismatch": mismatches[:8]}
        if dev > max_dev:
            max_dev = dev
            if dev > tol.spec and first_fail is None:
                first_fail = {"step": step, "max_dev": dev}
    residues = trace_support_mod3(base)
    ok = support_ok and max_dev <= tol.spec and len(residues) <= 1
    return {
        "check": "spectral_invariance",
        "steps": steps,
        "max_dev": max_dev,
        "support_invariant": support_ok,
        "trace_residues_mod3": residues,
        "first_fail": first_fail,
        "pass": bool(ok),
    }


def check_scaling_consistency(coords: Coords, nu: float, mus=(0.7, 1.3, -2.0), tol: Tolerances = DEFAULT) -> dict:
    """M(mu) built from the nu-scaled chart, evaluated at mu, must equal the
    original M evaluated at nu*mu."""
    from .shiftmap import scaling_action

    m_base = monodromy_mu(coords, None, tol)
    m_scaled = monodromy_mu(scaling_action(coords, nu), None, tol)
    max_dev = 0.0
    for mu in mus:
        lhs = lmat_eval(m_scaled, mu)
        rhs = lmat_eval(m_base, nu * mu)
        dev = float(
            np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs))))
        )
        max_dev = max(max_dev, dev)
    return {
        "check": "monodromy_scaling_consistency",
        "max_dev": max_dev,
        "pass": bool(max_dev <= 1e-8),
    }
