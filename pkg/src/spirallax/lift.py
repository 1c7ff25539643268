"""Canonical lift of a seed: the unique rescaling V_i = lambda_i * Vtil_i
with det(V_i, V_{i+1}, V_{i+2}) = 1 for i = 0..n.

Writing Lambda_i = ln lambda_i turns the constraints into a linear system
over the n+1 unknowns Lambda_0..Lambda_n. Rows 0..n-2 are plain windows
Lambda_i + Lambda_{i+1} + Lambda_{i+2}; the last two rows involve
Lambda_{n+1} and Lambda_{n+2}, which reduce to the base unknowns through

    lambda_{n+k} = lambda_{k-2} lambda_{k-1} lambda_k lambda_{k+1}   (k >= 1)
    lambda_{-1}  = lambda_{n+4} lambda_n lambda_{n-1} lambda_{n-2}

applied recursively with coefficient accumulation (needed for small n,
where the reduced indices overlap). The integer coefficient matrix has
|det| = 3 when n % 3 in {0, 2} and det = 0 when n % 3 == 1, so magnitudes
come from a real solve and signs from a GF(2) solve with the same matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConfiguration,
    IllConditioned,
    IndexOutOfRange,
    NotLiftable,
)
from .projgeo import mat_inverse, triple
from .spiral import Seed, VertexWindow, extend, lift_T, lift_Tbar, seed_p0
from .tolerances import DEFAULT, Tolerances


# ---------------------------------------------------------------------------
# the Lambda system


def _lambda_coeffs(n: int, j: int, cache: dict) -> np.ndarray:
    """Integer coefficients of Lambda_j over the base Lambda_0..Lambda_n."""
    if j in cache:
        return cache[j]
    if 0 <= j <= n:
        row = np.zeros(n + 1, dtype=np.int64)
        row[j] = 1
    elif j >= n + 1:
        k = j - n
        row = sum(_lambda_coeffs(n, k - 2 + t, cache) for t in range(4))
    elif j == -1:
        row = (
            _lambda_coeffs(n, n + 4, cache)
            + _lambda_coeffs(n, n, cache)
            + _lambda_coeffs(n, n - 1, cache)
            + _lambda_coeffs(n, n - 2, cache)
        )
    else:
        raise IndexOutOfRange(f"no reduction rule for lambda index {j}")
    cache[j] = row
    return row


@dataclass
class LambdaSystem:
    """Integer coefficient matrix and right-hand side of the lift system."""

    n: int
    matrix: np.ndarray  # (n+1, n+1) integer
    rhs_log: np.ndarray  # ln |g_i|
    rhs_sign: np.ndarray  # 1 where g_i < 0

    def int_det(self) -> int:
        return _int_det([[int(x) for x in row] for row in self.matrix])


def build_lambda_system(n: int, g) -> LambdaSystem:
    """Rows i = 0..n of lambda_i lambda_{i+1} lambda_{i+2} = g_i, with the
    out-of-range lambdas reduced symbolically to the base unknowns."""
    g = np.asarray(g, dtype=float)
    if g.shape != (n + 1,):
        raise IndexOutOfRange(f"need n+1 = {n + 1} values g_0..g_n, got {g.shape}")
    if np.any(g == 0.0) or not np.all(np.isfinite(g)):
        raise DegenerateConfiguration("every g_i must be finite and nonzero")
    cache: dict = {}
    rows = [
        _lambda_coeffs(n, i, cache)
        + _lambda_coeffs(n, i + 1, cache)
        + _lambda_coeffs(n, i + 2, cache)
        for i in range(n + 1)
    ]
    return LambdaSystem(
        n=n,
        matrix=np.vstack(rows),
        rhs_log=np.log(np.abs(g)),
        rhs_sign=(g < 0.0).astype(np.uint8),
    )


def _int_det(m) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    a = [row[:] for row in m]
    size = len(a)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _solve_gf2(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve A s = b over GF(2); valid whenever det(A) is odd."""
    a = (matrix % 2).astype(np.uint8)
    b = rhs.astype(np.uint8).copy()
    size = len(b)
    aug = np.concatenate([a, b[:, None]], axis=1)
    row = 0
    pivots = []
    for col in range(size):
        pivot = None
        for r in range(row, size):
            if aug[r, col]:
                pivot = r
                break
        if pivot is None:
            raise IllConditioned("sign system is singular over GF(2)")
        if pivot != row:
            aug[[row, pivot]] = aug[[pivot, row]]
        for r in range(size):
            if r != row and aug[r, col]:
                aug[r] ^= aug[row]
        pivots.append(col)
        row += 1
    s = np.zeros(size, dtype=np.uint8)
    for r, col in enumerate(pivots):
        s[col] = aug[r, -1]
    return s


def solve_lambdas(system: LambdaSystem, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Signed scale factors lambda_0..lambda_n from the Lambda system."""
    if system.n % 3 == 1 or system.int_det() == 0:
        raise NotLiftable(
            f"no unique lift for n = {system.n}: the rescaling system is singular"
        )
    lam_log = np.linalg.solve(system.matrix.astype(float), system.rhs_log)
    signs = _solve_gf2(system.matrix, system.rhs_sign)
    lam = np.where(signs == 1, -1.0, 1.0) * np.exp(lam_log)
    if not np.all(np.isfinite(lam)):
        raise IllConditioned("lambda solve produced non-finite scales")
    return lam


# ---------------------------------------------------------------------------
# lifted spirals


@dataclass
class LiftedSpiral:
    """Canonical lift over a window of indices, normally [-3, n+5]."""

    n: int
    window: VertexWindow
    monodromy: np.ndarray

    def __getitem__(self, i: int) -> np.ndarray:
        return self.window[i]

    def det_rho(self, i: int) -> float:
        return self.window.det_rho(i)

    def c_ratio(self, i: int) -> float:
        return self.window.c_ratio(i)

    def frame(self, i: int) -> np.ndarray:
        """rho_i = (V_i, V_{i+1}, V_{i+2}) as columns."""
        return np.column_stack([self[i], self[i + 1], self[i + 2]])

    def seed(self) -> Seed:
        """The seed this lift projects to (lifted representatives)."""
        return Seed(
            n=self.n,
            points=tuple(self[i].copy() for i in range(1, self.n + 1)),
            side_point=self[self.n + 1].copy(),
            monodromy=self.monodromy.copy(),
        )

    def extended(self, fwd: int, bwd: int, tol: Tolerances = DEFAULT) -> "LiftedSpiral":
        new = extend(self.seed(), self.window, fwd, bwd, tol)
        return LiftedSpiral(n=self.n, window=new, monodromy=self.monodromy)

    def max_unit_det_residual(self) -> float:
        return max(abs(self.det_rho(i) - 1.0) for i in range(self.n + 1))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "window": {"lo": self.window.lo, "hi": self.window.hi},
            "vectors": [[float(x) for x in v] for v in self.window.vectors],
            "monodromy": [[float(x) for x in row] for row in self.monodromy],
        }

    @staticmethod
    def from_json(obj: dict) -> "LiftedSpiral":
        lo = int(obj["window"]["lo"])
        vectors = [np.asarray(v, dtype=float) for v in obj["vectors"]]
        if int(obj["window"]["hi"]) != lo + len(vectors) - 1:
            raise IndexOutOfRange("window bounds do not match the vector count")
        return LiftedSpiral(
            n=int(obj["n"]),
            window=VertexWindow(lo, vectors),
            monodromy=np.asarray(obj["monodromy"], dtype=float),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def arbitrary_lift(seed: Seed, tol: Tolerances = DEFAULT):
    """Arbitrary-scale lifts Vtil_{-1}..Vtil_{n+4} consistent with the
    spiral recurrences, plus the g_i of the rescaling constraints.

    Vtil_{n+k} for k >= 2 is the forward image of the given lifts, and
    Vtil_{n+1} is recomputed as the forward image of Vtil_0 (its arbitrary
    input scale only enters through a scale-free combination), so the
    reduction rules of the Lambda system hold exactly on these lifts.
    """
    n = seed.n
    m_mat = seed.monodromy
    m_inv = mat_inverse(m_mat)
    vt = {i: seed.point(i).astype(float) for i in range(1, n + 1)}
    vt[0] = seed_p0(seed, tol)
    side = seed.side_point.astype(float)
    for k in range(2, 5):  # Vtil_{n+2} .. Vtil_{n+4}
        vt[n + k] = m_mat @ lift_T(vt[k - 2], vt[k - 1], vt[k], vt[k + 1], tol)
    den = triple(side, vt[n + 2], vt[n + 3])
    if abs(den) <= 1e-300:
        raise DegenerateConfiguration("degenerate frame at the side point")
    c_til = triple(vt[n + 2], vt[n + 3], vt[n + 4]) / den
    vt[-1] = m_inv @ lift_Tbar(vt[n - 2], vt[n - 1], vt[n], side, c_til, tol)
    vt[n + 1] = m_mat @ lift_T(vt[-1], vt[0], vt[1], vt[2], tol)
    g = np.empty(n + 1)
    for i in range(n + 1):
        d = triple(vt[i], vt[i + 1], vt[i + 2])
        if abs(d) <= 1e-300:
            raise DegenerateConfiguration(f"degenerate lifted frame at index {i}")
        g[i] = 1.0 / d
    return vt, g


def canonical_lift(seed: Seed, tol: Tolerances = DEFAULT) -> LiftedSpiral:
    """The unique lift with det(V_i, V_{i+1}, V_{i+2}) = 1 for i = 0..n,
    extended to the window [-3, n+5]."""
    seed.validate(tol, require_liftable=False)
    if seed.n % 3 == 1:
        raise NotLiftable(f"no unique lift exists for n = {seed.n}")
    n = seed.n
    vt, g = arbitrary_lift(seed, tol)
    lam = solve_lambdas(build_lambda_system(n, g), tol)
    vectors = [lam[i] * vt[i] for i in range(n + 1)]
    # lambda_{n+1} through the reduction rules, then extend geometrically
    lam_m1 = lam[2] * lam[3] * lam[4] * lam[5] * lam[n] * lam[n - 1] * lam[n - 2]
    lam_np1 = lam_m1 * lam[0] * lam[1] * lam[2]
    vectors.append(lam_np1 * vt[n + 1])
    window = VertexWindow(0, vectors)
    window = extend(seed, window, fwd=4, bwd=3, tol=tol)  # [-3, n+5]
    ls = LiftedSpiral(n=n, window=window, monodromy=seed.monodromy.astype(float))
    res = ls.max_unit_det_residual()
    if res > tol.lift:
        raise IllConditioned(
            f"unit-determinant residual {res:.3e} exceeds tolerance {tol.lift:.1e}"
        )
    return ls
