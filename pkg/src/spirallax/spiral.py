"""Seeds and the geometric vertex sequence of twisted spirals.

A seed is n base points p_1..p_n, a side point p_{n+1} on the segment
joining p_n and M p_1, and a unimodular monodromy M. The bi-infinite
vertex sequence spirals forward through

    V_{n+i} = M * T(V_{i-1}),   T(V_i) = (V_{i-1} x V_{i+1}) x (V_i x V_{i+2})

and backward through the companion map

    V_{-i} = M^{-1} * Tbar(V_{n-i+1}),
    Tbar(V_i) = c_{i+1} (V_i x V_{i+1}) x (V_{i-2} x V_{i-1})

where c_i is the ratio det(V_{i+1},V_{i+2},V_{i+3}) / det(V_i,V_{i+1},V_{i+2}).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateConfiguration, IndexOutOfRange, InvalidN
from .projgeo import (
    cross,
    mat_inverse,
    meet_of_joins,
    normalize_to_sl3,
    triple,
)
from .tolerances import DEFAULT, Tolerances


# ---------------------------------------------------------------------------
# seed


@dataclass(frozen=True)
class Seed:
    """n base points, the side point p_{n+1}, and the monodromy (det 1)."""

    n: int
    points: tuple  # n homogeneous vectors p_1 .. p_n
    side_point: np.ndarray  # p_{n+1}
    monodromy: np.ndarray  # 3x3, det 1

    def point(self, i: int) -> np.ndarray:
        """Base point p_i for i = 1..n, or p_{n+1} (the side point)."""
        if 1 <= i <= self.n:
            return self.points[i - 1]
        if i == self.n + 1:
            return self.side_point
        raise IndexOutOfRange(f"seed has points 1..{self.n + 1}, got {i}")

    def validate(self, tol: Tolerances = DEFAULT, require_liftable: bool = True) -> None:
        if self.n < 5:
            raise InvalidN(f"need n >= 5, got {self.n}")
        if require_liftable and self.n % 3 == 1:
            raise InvalidN(
                f"n = {self.n} is not admissible: the canonical lift exists "
                "only for n % 3 != 1"
            )
        if len(self.points) != self.n:
            raise InvalidN(f"expected {self.n} base points, got {len(self.points)}")
        d = float(np.linalg.det(self.monodromy))
        if abs(d - 1.0) > 1e-8:
            raise DegenerateConfiguration(f"monodromy must have det 1, got {d}")
        # side point sits on the line through p_n and M p_1
        mp1 = self.monodromy @ self.points[0]
        t = triple(self.points[-1], self.side_point, mp1)
        scale = float(
            np.linalg.norm(self.points[-1])
            * np.linalg.norm(self.side_point)
            * np.linalg.norm(mp1)
        )
        if abs(t) > 1e-8 * max(scale, 1.0):
            raise DegenerateConfiguration(
                "side point is not collinear with p_n and M p_1"
            )
        # no three consecutive seed points collinear
        pts = list(self.points) + [self.side_point]
        for k in range(len(pts) - 2):
            u, v, w = pts[k], pts[k + 1], pts[k + 2]
            s = float(np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w))
            if abs(triple(u, v, w)) <= tol.deg * max(s, 1.0):
                raise DegenerateConfiguration(
                    f"seed points {k + 1}, {k + 2}, {k + 3} are collinear"
                )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "points": [[float(x) for x in p] for p in self.points],
            "side_point": [float(x) for x in self.side_point],
            "monodromy": [[float(x) for x in row] for row in self.monodromy],
        }

    @staticmethod
    def from_json(obj: dict) -> "Seed":
        return Seed(
            n=int(obj["n"]),
            points=tuple(np.asarray(p, dtype=float) for p in obj["points"]),
            side_point=np.asarray(obj["side_point"], dtype=float),
            monodromy=np.asarray(obj["monodromy"], dtype=float),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# windows of lifted vertices


@dataclass
class VertexWindow:
    """Contiguous indices lo..hi mapped to lifted vertex vectors."""

    lo: int
    vectors: list

    @property
    def hi(self) -> int:
        return self.lo + len(self.vectors) - 1

    def __contains__(self, i: int) -> bool:
        return self.lo <= i <= self.hi

    def __getitem__(self, i: int) -> np.ndarray:
        if i not in self:
            raise IndexOutOfRange(f"index {i} outside window [{self.lo}, {self.hi}]")
        return self.vectors[i - self.lo]

    def copy(self) -> "VertexWindow":
        return VertexWindow(self.lo, [v.copy() for v in self.vectors])

    def det_rho(self, i: int) -> float:
        """det(V_i, V_{i+1}, V_{i+2})."""
        return triple(self[i], self[i + 1], self[i + 2])

    def c_ratio(self, i: int) -> float:
        """det(V_{i+1},V_{i+2},V_{i+3}) / det(V_i,V_{i+1},V_{i+2})."""
        den = self.det_rho(i)
        if abs(den) <= 1e-300:
            raise DegenerateConfiguration(f"vanishing frame determinant at index {i}")
        return self.det_rho(i + 1) / den


# ---------------------------------------------------------------------------
# the two vertex maps on lifts


def lift_T(vm1, v0, v1, v2, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Forward map on lifted vertices: (V_{i-1} x V_{i+1}) x (V_i x V_{i+2})."""
    return meet_of_joins(vm1, v1, v0, v2, tol)


def lift_Tbar(vm2, vm1, v0, v1, c_next: float, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Backward map on lifted vertices: c_{i+1} (V_i x V_{i+1}) x (V_{i-2} x V_{i-1})."""
    return c_next * meet_of_joins(v0, v1, vm2, vm1, tol)


def extend(seed: Seed, lift: VertexWindow, fwd: int, bwd: int, tol: Tolerances = DEFAULT) -> VertexWindow:
    """Extend a window forward/backward along the spiral recurrences.

    Forward appends V_j = M * T-image computed from indices j-n-2 .. j-n+1.
    Backward prepends V_m = M^{-1} * Tbar-image from indices m+n-1 .. m+n+2,
    with the c-ratio read off the window itself; this needs the window to
    reach m+n+5 on the right, so short windows refuse to extend backward.
    """
    if fwd < 0 or bwd < 0:
        raise IndexOutOfRange("fwd and bwd must be nonnegative")
    n = seed.n
    m_mat = seed.monodromy
    out = lift.copy()
    for _ in range(fwd):
        j = out.hi + 1
        if j - n - 2 < out.lo:
            raise IndexOutOfRange(
                f"window [{out.lo}, {out.hi}] too short to extend forward to {j}"
            )
        try:
            v = m_mat @ lift_T(out[j - n - 2], out[j - n - 1], out[j - n], out[j - n + 1], tol)
        except DegenerateConfiguration as exc:
            raise DegenerateConfiguration(f"forward extension failed at index {j}: {exc}") from exc
        out.vectors.append(v)
    if bwd > 0:
        m_inv = mat_inverse(m_mat)
        for _ in range(bwd):
            m = out.lo - 1
            if m + n + 5 > out.hi:
                raise IndexOutOfRange(
                    f"window [{out.lo}, {out.hi}] too short to extend backward to {m}: "
                    "the c-ratio needs forward data"
                )
            c_next = out.c_ratio(m + n + 2)
            try:
                v = m_inv @ lift_Tbar(
                    out[m + n - 1], out[m + n], out[m + n + 1], out[m + n + 2], c_next, tol
                )
            except DegenerateConfiguration as exc:
                raise DegenerateConfiguration(
                    f"backward extension failed at index {m}: {exc}"
                ) from exc
            out.vectors.insert(0, v)
            out.lo = m
    return out


def seed_p0(seed: Seed, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Lift of the vertex p_0 preceding the seed.

    p_0 lies on the line through p_2 and M^{-1} p_{n+1} (the pulled-back
    side line) and on the pullback by M of the line p_{n-1} p_n.
    """
    m_inv = mat_inverse(seed.monodromy)
    l1 = cross(seed.point(2), m_inv @ seed.side_point)
    l2 = cross(m_inv @ seed.point(seed.n - 1), m_inv @ seed.point(seed.n))
    v0 = cross(l1, l2)
    scale = float(np.linalg.norm(l1) * np.linalg.norm(l2))
    if float(np.linalg.norm(v0)) <= tol.deg * max(scale, 1.0):
        raise DegenerateConfiguration("p_0 construction degenerated")
    return v0


# ---------------------------------------------------------------------------
# classical closed-polygon map (sanity harness)


def closed_pentagram_T(points, tol: Tolerances = DEFAULT):
    """One step of the classical map on a closed polygon (cyclic indexing)."""
    n = len(points)
    if n < 5:
        raise InvalidN(f"need at least 5 points, got {n}")
    return [
        meet_of_joins(points[i - 1], points[(i + 1) % n], points[i], points[(i + 2) % n], tol)
        for i in range(n)
    ]


# ---------------------------------------------------------------------------
# polygon helpers


def _affine(p: np.ndarray) -> np.ndarray:
    if abs(p[2]) <= 1e-14 * float(np.linalg.norm(p)):
        raise DegenerateConfiguration("point at infinity has no affine image")
    return p / p[2]


def is_strictly_convex(points) -> bool:
    """Strict convexity of a closed polygon given by homogeneous points."""
    n = len(points)
    try:
        aff = [_affine(np.asarray(p, dtype=float))[:2] for p in points]
    except DegenerateConfiguration:
        return False
    sign = 0.0
    for i in range(n):
        e1 = aff[(i + 1) % n] - aff[i]
        e2 = aff[(i + 2) % n] - aff[(i + 1) % n]
        z = e1[0] * e2[1] - e1[1] * e2[0]
        if abs(z) <= 1e-12:
            return False
        if sign == 0.0:
            sign = np.sign(z)
        elif np.sign(z) != sign:
            return False
    return True


def point_in_convex_polygon(q, points) -> bool:
    """Strict containment of q in the convex polygon (counterclockwise)."""
    n = len(points)
    qa = _affine(np.asarray(q, dtype=float))[:2]
    aff = [_affine(np.asarray(p, dtype=float))[:2] for p in points]
    for i in range(n):
        e = aff[(i + 1) % n] - aff[i]
        w = qa - aff[i]
        if e[0] * w[1] - e[1] * w[0] <= 0.0:
            return False
    return True


def polygon_invariants(points) -> np.ndarray:
    """Projective invariants of an ordered polygon, two per vertex.

    Each invariant is a ratio of triple products in which every point
    appears equally often in numerator and denominator, so the vector is
    unchanged by rescaling individual lifts and by any projective map.
    """
    n = len(points)
    p = [np.asarray(q, dtype=float) for q in points]

    def det3(i, j, k):
        return triple(p[i % n], p[j % n], p[k % n])

    out = np.empty(2 * n)
    for i in range(n):
        den = det3(i, i + 1, i + 3) * det3(i, i + 2, i + 4)
        if abs(den) <= 1e-300:
            raise DegenerateConfiguration("degenerate quintuple in invariant")
        out[2 * i] = det3(i, i + 1, i + 2) * det3(i, i + 3, i + 4) / den
        out[2 * i + 1] = det3(i, i + 1, i + 4) * det3(i, i + 2, i + 3) / den
    return out


def projectively_equivalent(pts_a, pts_b, tol: float = 1e-8, allow_reversal: bool = True) -> bool:
    """Projective equivalence of two ordered polygons, up to cyclic relabeling."""
    n = len(pts_a)
    if len(pts_b) != n:
        return False
    inv_a = polygon_invariants(pts_a)
    candidates = [list(pts_b)]
    if allow_reversal:
        candidates.append(list(reversed(list(pts_b))))
    for cand in candidates:
        for s in range(n):
            rotated = cand[s:] + cand[:s]
            inv_b = polygon_invariants(rotated)
            if float(np.max(np.abs(inv_a - inv_b))) <= tol * max(1.0, float(np.max(np.abs(inv_a)))):
                return True
    return False


# ---------------------------------------------------------------------------
# random seeds


def _perturbed_regular_polygon(n: int, rng: np.random.Generator):
    """Counterclockwise strictly convex n-gon near the regular one."""
    step = 2.0 * np.pi / n
    angles = np.arange(n) * step + 0.35 * step * (rng.uniform(size=n) - 0.5)
    radii = 1.0 + 0.1 * rng.uniform(-1.0, 1.0, size=n)
    return [np.array([r * np.cos(t), r * np.sin(t), 1.0]) for r, t in zip(radii, angles)]


def random_seed(n: int, rng_seed: int, twist: float = 0.0, tol: Tolerances = DEFAULT) -> Seed:
    """Deterministic pseudo-random seed: perturbed regular n-gon, side
    parameter in (0.2, 0.8), monodromy expm(twist * G) normalized to det 1."""
    if n < 5 or n % 3 == 1:
        raise InvalidN(f"n must satisfy n >= 5 and n % 3 != 1, got {n}")
    rng = np.random.default_rng(rng_seed)
    for _ in range(64):
        pts = _perturbed_regular_polygon(n, rng)
        if twist == 0.0:
            m_mat = np.eye(3)
        else:
            g = rng.uniform(-1.0, 1.0, size=(3, 3))
            m_mat = normalize_to_sl3(expm(twist * g))
        t = rng.uniform(0.2, 0.8)
        if not is_strictly_convex(pts):
            continue
        try:
            side = (1.0 - t) * _affine(pts[-1]) + t * _affine(m_mat @ pts[0])
            seed = Seed(n=n, points=tuple(pts), side_point=side, monodromy=m_mat)
            seed.validate(tol)
        except DegenerateConfiguration:
            continue
        return seed
    raise DegenerateConfiguration(f"could not draw a generic convex seed for n = {n}")
