"""Moduli coordinates of a twisted spiral and the derived boundary invariants.

A canonical lift satisfies the three-term recurrence

    V_{i+3} = a_i V_{i+2} + b_i V_{i+1} + c_i V_i

with c_i = 1 for i = 0..n-1. The chart is {a_0..a_{n-1}, b_0..b_{n-1}, c_n};
everything else is a rational function of it:

    A_i    = c_i + a_i b_{i-1}           A_0 = a_{n-1} c_n / (A_1 a_0)
    a_n    = a_1                         b_n = (c_n / a_{n-2})(c_n/(A_1 A_2) - 1)
    B_n    = c_n + b_n a_{n-2}           c_{n+1} = c_n / B_n
    c_{-1} = a_{n-1} / a_0 = A_0 A_1 / c_n
    b_{-1} = (A_0 - 1) / a_0
    a_{-1} = a_{n-1}^2 a_{n-2} A_1 A_2 / (a_0^2 c_n A_0)

The transfer matrices K_i and the local gauge matrices relating far-index
K's to base-index K's live here too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import GenericityViolation, IllConditioned, IndexOutOfRange
from .lift import LiftedSpiral
from .projgeo import mat_inverse
from .tolerances import DEFAULT, Tolerances


def _gdiv(num: float, den: float, what: str) -> float:
    if abs(den) <= 1e-12 * max(1.0, abs(num)):
        raise GenericityViolation(f"vanishing divisor in {what}: {den}")
    return num / den


@dataclass(frozen=True)
class Coords:
    """The 2n+1 chart {a_0..a_{n-1}, b_0..b_{n-1}, c_n}."""

    n: int
    a: np.ndarray
    b: np.ndarray
    c_n: float

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.a, self.b, [self.c_n]])

    def to_json(self, derived: "DerivedInv | None" = None) -> dict:
        obj = {
            "n": self.n,
            "a": [float(x) for x in self.a],
            "b": [float(x) for x in self.b],
            "c_n": float(self.c_n),
        }
        if derived is not None:
            obj["derived"] = {
                "a_n": derived.a_n,
                "b_n": derived.b_n,
                "c_n1": derived.c_n1,
                "a_m1": derived.a_m1,
                "b_m1": derived.b_m1,
                "c_m1": derived.c_m1,
                "A": [float(x) for x in derived.A],
            }
        return obj

    @staticmethod
    def from_json(obj: dict) -> "Coords":
        return Coords(
            n=int(obj["n"]),
            a=np.asarray(obj["a"], dtype=float),
            b=np.asarray(obj["b"], dtype=float),
            c_n=float(obj["c_n"]),
        )

    def dumps(self, derived: "DerivedInv | None" = None) -> str:
        return json.dumps(self.to_json(derived), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class DerivedInv:
    """Boundary invariants derived from the chart (see module docstring)."""

    A: np.ndarray  # A_0 .. A_n
    B_n: float
    a_n: float
    b_n: float
    c_n1: float
    a_m1: float
    b_m1: float
    c_m1: float


# ---------------------------------------------------------------------------
# extraction from a canonical lift


def invariants_at(ls: LiftedSpiral, i: int):
    """(a_i, b_i, c_i) by determinant ratios at an arbitrary window index."""
    den = ls.det_rho(i)
    if abs(den) <= 1e-300:
        raise GenericityViolation(f"vanishing frame determinant at index {i}")
    from .projgeo import triple

    v0, v1, v2, v3 = ls[i], ls[i + 1], ls[i + 2], ls[i + 3]
    return (
        triple(v0, v1, v3) / den,
        triple(v0, v3, v2) / den,
        triple(v1, v2, v3) / den,
    )


def extract_coords(ls: LiftedSpiral, tol: Tolerances = DEFAULT) -> Coords:
    """Chart of a canonical lift; verifies c_i = 1 on the base window."""
    n = ls.n
    a = np.empty(n)
    b = np.empty(n)
    for i in range(n):
        a[i], b[i], c_i = invariants_at(ls, i)
        if abs(c_i - 1.0) > tol.lift:
            raise IllConditioned(
                f"c_{i} = {c_i} deviates from 1: lift is not canonical"
            )
    c_n = invariants_at(ls, n)[2]
    coords = Coords(n=n, a=a, b=b, c_n=c_n)
    check_genericity(coords)
    return coords


def check_genericity(coords: Coords) -> None:
    scale = max(1.0, float(np.max(np.abs(coords.a))))
    for name, val in (
        ("a_0", coords.a[0]),
        (f"a_{coords.n - 1}", coords.a[-1]),
        (f"a_{coords.n - 2}", coords.a[-2]),
        ("c_n", coords.c_n),
    ):
        if abs(val) <= 1e-12 * scale:
            raise GenericityViolation(f"{name} = {val} is numerically zero")


# ---------------------------------------------------------------------------
# derived invariants


def derive(coords: Coords, tol: Tolerances = DEFAULT) -> DerivedInv:
    n, a, b, c_n = coords.n, coords.a, coords.b, coords.c_n
    check_genericity(coords)
    A = np.empty(n + 1)
    for i in range(1, n):
        A[i] = 1.0 + a[i] * b[i - 1]
    A[0] = _gdiv(a[n - 1] * c_n, A[1] * a[0], "A_0")
    a_n = a[1]
    b_n = _gdiv(c_n, a[n - 2], "b_n") * (_gdiv(c_n, A[1] * A[2], "b_n") - 1.0)
    B_n = c_n + b_n * a[n - 2]
    c_n1 = _gdiv(c_n, B_n, "c_{n+1}")
    A[n] = c_n + a_n * b[n - 1]
    c_m1 = _gdiv(a[n - 1], a[0], "c_{-1}")
    b_m1 = _gdiv(A[0] - 1.0, a[0], "b_{-1}")
    a_m1 = _gdiv(
        a[n - 1] ** 2 * a[n - 2] * A[1] * A[2],
        a[0] ** 2 * c_n * A[0],
        "a_{-1}",
    )
    for i in range(4):
        if abs(A[i]) <= 1e-12 * max(1.0, float(np.max(np.abs(A[: n + 1])))):
            raise GenericityViolation(f"A_{i} = {A[i]} is numerically zero")
    return DerivedInv(
        A=A, B_n=B_n, a_n=a_n, b_n=b_n, c_n1=c_n1, a_m1=a_m1, b_m1=b_m1, c_m1=c_m1
    )


# ---------------------------------------------------------------------------
# transfer and gauge matrices


def k_matrix(a: float, b: float, c: float) -> np.ndarray:
    """Companion matrix with columns (0,1,0), (0,0,1), (c,b,a)."""
    return np.array([[0.0, 0.0, c], [1.0, 0.0, b], [0.0, 1.0, a]])


def inv_a(coords: Coords, derived: DerivedInv, i: int) -> float:
    n = coords.n
    if 0 <= i <= n - 1:
        return float(coords.a[i])
    if i == n:
        return derived.a_n
    if i == n + 1:
        return float(coords.a[2])  # a_{n+1} = a_2
    if i == -1:
        return derived.a_m1
    raise IndexOutOfRange(f"a_{i} is not available from the chart")


def inv_b(coords: Coords, derived: DerivedInv, i: int) -> float:
    n = coords.n
    if 0 <= i <= n - 1:
        return float(coords.b[i])
    if i == n:
        return derived.b_n
    if i == n + 1:
        return derived.b_m1 * _gdiv(derived.A[2], derived.A[0], "b_{n+1}")
    if i == -1:
        return derived.b_m1
    raise IndexOutOfRange(f"b_{i} is not available from the chart")


def inv_c(coords: Coords, derived: DerivedInv, i: int) -> float:
    n = coords.n
    if 0 <= i <= n - 1:
        return 1.0
    if i == n:
        return float(coords.c_n)
    if i == n + 1:
        return derived.c_n1
    if i == -1:
        return derived.c_m1
    raise IndexOutOfRange(f"c_{i} is not available from the chart")


def inv_d(coords: Coords, derived: DerivedInv, i: int) -> float:
    """det(rho_i) from products of c-values: d_{i+1} = c_i d_i, d_0 = 1."""
    n = coords.n
    if 0 <= i <= n:
        return 1.0
    if i == n + 1:
        return float(coords.c_n)
    if i == n + 2:
        return float(coords.c_n) * derived.c_n1
    if i == -1:
        return _gdiv(1.0, derived.c_m1, "d_{-1}")
    raise IndexOutOfRange(f"d_{i} is not available from the chart")


def k_at(coords: Coords, derived: DerivedInv, i: int) -> np.ndarray:
    """K_i for i in [-1, n+1], boundary entries from the derived formulas."""
    return k_matrix(
        inv_a(coords, derived, i), inv_b(coords, derived, i), inv_c(coords, derived, i)
    )


def gauge_A(i: int, coords: Coords, derived: DerivedInv) -> np.ndarray:
    """Local gauge matrix relating K_{n+i} to K_{i-2} (valid for i >= 1).

    Columns: d_{i-2} (c_{i-2}, 0, a_{i-2}),
             d_{i-1} K_{i-2} (c_{i-1}, 0, a_{i-1}),
             d_i K_{i-2} K_{i-1} (c_i, 0, a_i).
    """
    if i < 1:
        raise IndexOutOfRange(f"gauge matrix defined for i >= 1, got {i}")

    def stub(j):
        return np.array([inv_c(coords, derived, j), 0.0, inv_a(coords, derived, j)])

    k_im2 = k_at(coords, derived, i - 2)
    k_im1 = k_at(coords, derived, i - 1)
    col1 = inv_d(coords, derived, i - 2) * stub(i - 2)
    col2 = inv_d(coords, derived, i - 1) * (k_im2 @ stub(i - 1))
    col3 = inv_d(coords, derived, i) * (k_im2 @ k_im1 @ stub(i))
    return np.column_stack([col1, col2, col3])


def gauge_B(i: int, n: int, inv) -> np.ndarray:
    """Local gauge matrix relating K_{-i} to K_{n-i-1} (valid for i >= 3).

    `inv` maps an index j to geometrically extracted (a_j, b_j, c_j); the
    d-values are rebuilt from those c's. Columns:
        c_{n-i+2} d_{n-i-1} (c_{n-i-1}, b_{n-i-1}, 0),
        c_{n-i+3} d_{n-i}   K_{n-i-1} (c_{n-i}, b_{n-i}, 0),
        c_{n-i+4} d_{n-i+1} K_{n-i-1} K_{n-i} (c_{n-i+1}, b_{n-i+1}, 0).
    """
    if not 3 <= i <= n:
        raise IndexOutOfRange(f"gauge matrix defined for 3 <= i <= n, got {i}")

    def d_of(j):
        # d_0 = 1 and d_{j+1} = c_j d_j, walked outward from 0
        d = 1.0
        if j >= 0:
            for t in range(j):
                d *= inv(t)[2]
        else:
            for t in range(-1, j - 1, -1):
                d = _gdiv(d, inv(t)[2], f"d_{t}")
        return d

    def stub(j):
        a_j, b_j, c_j = inv(j)
        return np.array([c_j, b_j, 0.0])

    base = n - i - 1
    k0 = k_matrix(inv(base)[0], inv(base)[1], inv(base)[2])
    k1 = k_matrix(inv(base + 1)[0], inv(base + 1)[1], inv(base + 1)[2])
    col1 = inv(n - i + 2)[2] * d_of(base) * stub(base)
    col2 = inv(n - i + 3)[2] * d_of(base + 1) * (k0 @ stub(base + 1))
    col3 = inv(n - i + 4)[2] * d_of(base + 2) * (k0 @ k1 @ stub(base + 2))
    return np.column_stack([col1, col2, col3])


# ---------------------------------------------------------------------------
# frames and the monodromy representative


def reconstruct_frames(coords: Coords, count: int, derived: DerivedInv | None = None):
    """Frames rho_0 = I, rho_{j+1} = rho_j K_j. Base coordinates carry the
    chain to rho_{n+1} (K_n needs the derived boundary entries)."""
    n = coords.n
    if count > n + 2:
        raise IndexOutOfRange(
            f"frames beyond rho_{n + 1} need gauge-propagated K's (asked for {count})"
        )
    if count > n + 1 and derived is None:
        derived = derive(coords)
    frames = [np.eye(3)]
    for j in range(count - 1):
        if j < n:
            k_j = k_matrix(coords.a[j], coords.b[j], 1.0)
        else:
            k_j = k_matrix(derived.a_n, derived.b_n, coords.c_n)
        frames.append(frames[-1] @ k_j)
    return frames


def monodromy_representative(coords: Coords, derived: DerivedInv | None = None) -> np.ndarray:
    """K_0 K_1 ... K_n A_1^{-1} K_{-1}: the conjugacy-class representative
    rho_0^{-1} M rho_0 of the monodromy in the chart."""
    if derived is None:
        derived = derive(coords)
    n = coords.n
    prod = np.eye(3)
    for j in range(n):
        prod = prod @ k_matrix(coords.a[j], coords.b[j], 1.0)
    prod = prod @ k_matrix(derived.a_n, derived.b_n, coords.c_n)
    a1 = gauge_A(1, coords, derived)
    return prod @ mat_inverse(a1) @ k_at(coords, derived, -1)
