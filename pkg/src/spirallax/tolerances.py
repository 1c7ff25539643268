"""Numerical tolerances used across the package.

All comparisons in the library route through a `Tolerances` value so that
callers can tighten or relax individual thresholds without touching code.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Thresholds for the different numerical regimes.

    lin   relative error allowed on algebraic identities of 3x3 products
    proj  componentwise error for projective equality of normalized vectors
    deg   relative scale under which a construction counts as degenerate
    lift  residual allowed on the unit-determinant constraints of a lift
    shift shift-map consistency (two lifts plus determinant ratios compound)
    spec  relative error on spectral coefficients, per r-degree block
    trim  coefficients below trim * (block max) are dropped from supports
    """

    lin: float = 1e-10
    proj: float = 1e-8
    deg: float = 1e-12
    lift: float = 1e-8
    shift: float = 1e-7
    spec: float = 1e-6
    trim: float = 1e-13

    def with_overrides(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT = Tolerances()
