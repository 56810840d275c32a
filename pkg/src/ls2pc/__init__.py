"""Principal-subspace estimation by iterated least squares.

The package computes the span of the leading d principal components of a
p x N sample matrix by alternating an ordinary least-squares fit with
Gram-Schmidt re-basing, verifies at runtime that the iterates coincide
span-for-span with classical subspace iterations on R R^T, and measures
the geometric convergence rate against a self-contained Jacobi
eigensolver oracle.
"""

from .datagen import (
    GeneratedInstance,
    GenSpec,
    generate_with_spectrum,
    random_orthonormal,
    splitmix64,
    standard_normals,
)
from .dense_core import (
    as_basis,
    as_data_matrix,
    as_spectrum,
    as_symmetric,
    cholesky_spd,
    frobenius_norm,
    gram_schmidt,
    jacobi_eigh,
    matmul,
    matvec,
    principal_angles,
    projector_distance,
    solve_spd,
    spectral_gap_degenerate,
    subspace_distance,
    transpose,
)
from .errors import (
    ConditionViolated,
    ConditionWarning,
    DimensionMismatch,
    LinAlgError,
    NoConvergence,
    NotPositiveDefinite,
    NotUnit,
    RankDeficient,
    SelfCheckFailed,
    WindowAtFloor,
)
from .iterations import (
    ConditionCheck,
    IterationSettings,
    IterationTrace,
    StopMetric,
    SubspaceResult,
    Terminated,
    TraceStep,
    check_condition,
    least_squares_step,
    ls2pc,
    power_iteration,
    run_paired,
    subspace_iteration,
)
from .metrics import (
    RateEstimate,
    clip_window_to_floor,
    error_sequence,
    estimate_rate,
)
from .pca_oracle import (
    PcaResult,
    PearsonSweep,
    covariance,
    pca_topd,
    pearson_equivalence_2d,
    sum_sq_distances,
    variance_along,
)
from .tolerances import TOL, Tolerances

__version__ = "0.1.0"

__all__ = [
    "TOL",
    "Tolerances",
    "ConditionCheck",
    "ConditionViolated",
    "ConditionWarning",
    "DimensionMismatch",
    "GenSpec",
    "GeneratedInstance",
    "IterationSettings",
    "IterationTrace",
    "LinAlgError",
    "NoConvergence",
    "NotPositiveDefinite",
    "NotUnit",
    "PcaResult",
    "PearsonSweep",
    "RankDeficient",
    "RateEstimate",
    "SelfCheckFailed",
    "StopMetric",
    "SubspaceResult",
    "Terminated",
    "TraceStep",
    "WindowAtFloor",
    "as_basis",
    "as_data_matrix",
    "as_spectrum",
    "as_symmetric",
    "check_condition",
    "cholesky_spd",
    "clip_window_to_floor",
    "covariance",
    "error_sequence",
    "estimate_rate",
    "frobenius_norm",
    "generate_with_spectrum",
    "gram_schmidt",
    "jacobi_eigh",
    "least_squares_step",
    "ls2pc",
    "matmul",
    "matvec",
    "pca_topd",
    "pearson_equivalence_2d",
    "power_iteration",
    "principal_angles",
    "projector_distance",
    "random_orthonormal",
    "run_paired",
    "solve_spd",
    "spectral_gap_degenerate",
    "splitmix64",
    "standard_normals",
    "subspace_distance",
    "subspace_iteration",
    "sum_sq_distances",
    "transpose",
    "variance_along",
]
