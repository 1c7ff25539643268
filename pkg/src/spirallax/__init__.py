"""Twisted pentagram spirals: canonical lifts, moduli coordinates, the
shift map, and the spectral invariants of its monodromy."""

from . import errors
from .coords import (
    Coords,
    DerivedInv,
    derive,
    extract_coords,
    gauge_A,
    gauge_B,
    invariants_at,
    k_matrix,
    monodromy_representative,
    reconstruct_frames,
)
from .laxspec import (
    A1_mu,
    K_mu,
    LaurentPoly,
    R_mat,
    SpectralTable,
    check_scaling_consistency,
    monodromy_mu,
    spectral_table,
    verify_lax,
    verify_spectral_invariance,
)
from .lift import (
    LambdaSystem,
    LiftedSpiral,
    build_lambda_system,
    canonical_lift,
    solve_lambdas,
)
from .shiftmap import (
    AlphaBeta,
    ExpSchedule,
    alpha_beta,
    exp_schedule,
    geometric_shift,
    measured_lift_ratio,
    scaling_action,
    shift_coords,
    shift_orbit,
    verify_equivariance,
    verify_shift_commutation,
)
from .spiral import (
    Seed,
    VertexWindow,
    closed_pentagram_T,
    extend,
    lift_T,
    lift_Tbar,
    projectively_equivalent,
    random_seed,
)
from .tolerances import DEFAULT, Tolerances

__version__ = "0.1.0"

__all__ = [
    "A1_mu",
    "AlphaBeta",
    "Coords",
    "DEFAULT",
    "DerivedInv",
    "ExpSchedule",
    "K_mu",
    "LambdaSystem",
    "LaurentPoly",
    "LiftedSpiral",
    "R_mat",
    "Seed",
    "SpectralTable",
    "Tolerances",
    "VertexWindow",
    "alpha_beta",
    "build_lambda_system",
    "canonical_lift",
    "check_scaling_consistency",
    "closed_pentagram_T",
    "derive",
    "errors",
    "exp_schedule",
    "extend",
    "extract_coords",
    "gauge_A",
    "gauge_B",
    "geometric_shift",
    "invariants_at",
    "k_matrix",
    "lift_T",
    "lift_Tbar",
    "measured_lift_ratio",
    "monodromy_mu",
    "monodromy_representative",
    "projectively_equivalent",
    "random_seed",
    "reconstruct_frames",
    "scaling_action",
    "shift_coords",
    "shift_orbit",
    "solve_lambdas",
    "spectral_table",
    "verify_equivariance",
    "verify_lax",
    "verify_shift_commutation",
    "verify_spectral_invariance",
]
