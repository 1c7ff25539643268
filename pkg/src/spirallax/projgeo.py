"""Primitives for projective points and 3x3 matrices in homogeneous coordinates.

A point of the projective plane is a numpy vector of shape (3,); two vectors
represent the same point when they differ by a nonzero scale. Lines are also
(3,) vectors (covectors); the cross product is both the join of two points
and the meet of two lines. Everything here is a pure function on values.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateConfiguration, SingularMatrix
from .tolerances import DEFAULT, Tolerances

Vec3 = np.ndarray
Mat3 = np.ndarray

# components of a unit vector below this count as zero when picking the
# leading entry for sign normalization
_LEAD_TOL = 1e-9


def vec3(x: float, y: float, z: float) -> Vec3:
    return np.array([x, y, z], dtype=float)


def cross(u: Vec3, v: Vec3) -> Vec3:
    """Join of two points / meet of two lines."""
    return np.cross(u, v)


def triple(u: Vec3, v: Vec3, w: Vec3) -> float:
    """Determinant of the 3x3 matrix with columns u, v, w."""
    return float(np.dot(u, np.cross(v, w)))


def meet_of_joins(a: Vec3, b: Vec3, c: Vec3, d: Vec3, tol: Tolerances = DEFAULT) -> Vec3:
    """Intersection of line ab with line cd, i.e. (a x b) x (c x d)."""
    lab = np.cross(a, b)
    lcd = np.cross(c, d)
    out = np.cross(lab, lcd)
    scale = float(np.linalg.norm(lab) * np.linalg.norm(lcd))
    if float(np.linalg.norm(out)) <= tol.deg * max(scale, np.finfo(float).tiny):
        raise DegenerateConfiguration("lines ab and cd do not meet in a unique point")
    return out


def mat_mul(a: Mat3, b: Mat3) -> Mat3:
    return a @ b


def mat_apply(m: Mat3, v: Vec3) -> Vec3:
    return m @ v


def mat_det(m: Mat3) -> float:
    return float(np.linalg.det(m))


def mat_inverse(m: Mat3) -> Mat3:
    d = mat_det(m)
    if not np.isfinite(d) or abs(d) <= 1e-300:
        raise SingularMatrix(f"matrix is singular (det = {d})")
    return np.linalg.inv(m)


def real_cbrt(x: float) -> float:
    """Real cube root, real branch for negative arguments: real_cbrt(-8) = -2."""
    return float(np.cbrt(x))


def normalize_to_sl3(m: Mat3) -> Mat3:
    """Rescale so the determinant is 1 (real cube root keeps the sign right)."""
    d = mat_det(m)
    if not np.isfinite(d) or abs(d) <= 1e-300:
        raise SingularMatrix(f"cannot normalize singular matrix (det = {d})")
    return m / real_cbrt(d)


def proj_normalize(v: Vec3, tol: Tolerances = DEFAULT) -> Vec3:
    """Unit-norm representative with the first significant component positive."""
    n = float(np.linalg.norm(v))
    if not np.isfinite(n) or n <= 0.0:
        raise DegenerateConfiguration("zero vector is not a projective point")
    u = v / n
    for comp in u:
        if abs(comp) > _LEAD_TOL:
            return u if comp > 0 else -u
    raise DegenerateConfiguration("vector has no significant component")


def proj_equal(u: Vec3, v: Vec3, tol: Tolerances = DEFAULT) -> bool:
    """Equality of projective points, up to scale and sign."""
    return bool(
        np.all(np.abs(proj_normalize(u, tol) - proj_normalize(v, tol)) <= tol.proj)
    )


def map_from_four_points(src, dst, tol: Tolerances = DEFAULT) -> Mat3:
    """SL(3) representative of the projective map taking four source points
    to four target points (both quadruples in general position)."""

    def frame(pts):
        a = np.column_stack([np.asarray(p, dtype=float) for p in pts[:3]])
        try:
            w = np.linalg.solve(a, np.asarray(pts[3], dtype=float))
        except np.linalg.LinAlgError as exc:
            raise DegenerateConfiguration("first three points are collinear") from exc
        if np.min(np.abs(w)) <= tol.deg * max(1.0, float(np.max(np.abs(w)))):
            raise DegenerateConfiguration("fourth point is degenerate w.r.t. the frame")
        return a * w

    return normalize_to_sl3(frame(dst) @ mat_inverse(frame(src)))
