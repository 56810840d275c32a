"""Central tolerance configuration.

Every numerical threshold used by the package lives in this one frozen
record so a reviewer (or a test) can see and override them in a single
place. All *_rel fields are relative: the docstring of each consumer states
what they are scaled by.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # x d: allowed ||U^T U - I||_F for a matrix to count as an orthonormal basis
    orthonormality_rel: float = 1e-12
    # x ||S||_F: allowed asymmetry ||S - S^T||_F
    symmetry_rel: float = 1e-12
    # x ||M||_F: Gram-Schmidt column pivot below this is rank deficiency
    gram_schmidt_pivot_rel: float = 1e-12
    # x trace(S)/d: Cholesky pivot below this is a positive-definiteness failure
    cholesky_pivot_rel: float = 1e-14
    # x ||S||_F: off-diagonal Frobenius mass at which Jacobi sweeps stop
    jacobi_off_rel: float = 1e-12
    jacobi_max_sweeps: int = 50
    # allowed | ||w|| - 1 | for unit-vector arguments
    unit_norm_abs: float = 1e-12
    # smallest singular value of U0^T Ud above which the rank condition holds
    condition_min_cosine: float = 1e-8
    # x sigma_d: relative gap under which sigma_d and sigma_{d+1} count as tied
    degenerate_gap_rel: float = 1e-10
    # x ||R||_F^2: allowed disagreement between the two squared-distance routes
    identity_check_rel: float = 1e-10
    # x ||R||_F^2: objective spread under which a 2-D sweep is flagged isotropic
    isotropic_objective_rel: float = 1e-12
    # absolute error floor for rate fitting; windows must stay above 100x this
    error_floor: float = 1e-13
    # paired-run equivalence threshold used by the compare command's exit code
    paired_equivalence: float = 1e-8


TOL = Tolerances()
