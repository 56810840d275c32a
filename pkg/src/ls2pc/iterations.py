"""The three subspace-seeking iterations and their runtime equivalence check.

* ``power_iteration``      — repeated apply-and-normalize, d = 1.
* ``subspace_iteration``   — multiply a basis by a symmetric matrix, then
                             re-orthonormalize.
* ``ls2pc``                — iterated linear least-squares on the data
                             matrix itself: project the samples onto the
                             current basis, fit them back by ordinary least
                             squares, re-orthonormalize the fitted frame.

The least-squares route touches only the p x N data matrix, yet its column
spans coincide iteration-by-iteration with subspace iterations on R R^T.
``run_paired`` executes both from the same start and measures that
coincidence, and ``check_condition`` tests the rank condition
rank(U0^T Ud) = d that convergence to the leading subspace requires.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dense_core import (
    DimensionMismatch,
    as_basis,
    as_data_matrix,
    as_symmetric,
    frobenius_norm,
    gram_schmidt,
    jacobi_eigh,
    projector_distance,
    solve_spd,
    spectral_gap_degenerate,
    subspace_distance,
)
from .errors import ConditionViolated, ConditionWarning, NotPositiveDefinite, NotUnit
from .tolerances import TOL


class StopMetric(str, enum.Enum):
    """How the per-iteration change ||U - U_prev|| is measured."""

    # basis-invariant: ||U U^T - U_prev U_prev^T||_F / sqrt(2)
    PROJECTOR_DISTANCE = "projector"
    # literal Frobenius difference of the basis matrices
    RAW_BASIS_DIFFERENCE = "raw"


class Terminated(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"


@dataclass(frozen=True)
class IterationSettings:
    """Convergence threshold, iteration cap, stop metric, trace recording."""

    eps: float = 1e-10
    max_iter: int = 1000
    stop_metric: StopMetric = StopMetric.PROJECTOR_DISTANCE
    record_trace: bool = True

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class TraceStep:
    """One recorded iteration: index, basis after the step, change, oracle error."""

    k: int
    basis: np.ndarray | None
    step_change: float
    oracle_error: float | None = None


@dataclass(frozen=True)
class IterationTrace:
    """Recorded steps (k = 1, 2, ...) plus the basis the run started from."""

    steps: tuple[TraceStep, ...] = ()
    initial_basis: np.ndarray | None = None


@dataclass(frozen=True)
class SubspaceResult:
    basis: np.ndarray
    iterations: int
    terminated: Terminated
    trace: IterationTrace = field(default_factory=IterationTrace)
    # None when no oracle spectrum was supplied to judge uniqueness
    degenerate_gap: bool | None = None


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of the rank-condition test: flag plus the smallest cosine."""

    satisfied: bool
    smallest_cosine: float


def check_condition(U0, Ud) -> ConditionCheck:
    """Test rank(U0^T Ud) = d numerically.

    ``smallest_cosine`` is the smallest singular value of U0^T Ud (the
    cosine of the largest canonical angle between the spans); the condition
    counts as satisfied when it exceeds ``TOL.condition_min_cosine``.
    Invariant under orthogonal re-basing of either argument.
    """
    U = as_basis(U0)
    V = as_basis(Ud)
    if U.shape != V.shape:
        raise DimensionMismatch(f"bases of shape {U.shape} and {V.shape} differ")
    G = U.T @ V
    lam, _ = jacobi_eigh(G.T @ G)
    smallest = float(np.sqrt(max(float(lam[-1]), 0.0)))
    return ConditionCheck(
        satisfied=smallest > TOL.condition_min_cosine, smallest_cosine=smallest
    )


def least_squares_step(R, U) -> np.ndarray:
    """Best least-squares fit of the samples from their projections onto span(U).

    With X = U^T R (the coordinates of the samples in the current basis),
    returns the p x d matrix A minimizing ||R - A X||_F, obtained from the
    normal equations A (X X^T) = R X^T via Cholesky. The d x d Gram matrix
    X X^T is positive definite exactly when X has full row rank, which the
    rank condition guarantees.

    Raises
    ------
    ConditionViolated
        when X X^T is numerically singular, i.e. some direction in span(U)
        is orthogonal to the span of the data.
    """
    A = as_data_matrix(R)
    U = as_basis(U)
    if U.shape[0] != A.shape[0]:
        raise DimensionMismatch(
            f"basis lives in R^{U.shape[0]} but data lives in R^{A.shape[0]}"
        )
    X = U.T @ A
    G = X @ X.T
    try:
        fitted_t = solve_spd(0.5 * (G + G.T), X @ A.T)
    except NotPositiveDefinite as exc:
        raise ConditionViolated(
            "projected Gram matrix X X^T is numerically singular; the basis "
            "violates the rank condition rank(U0^T Ud) = d (some direction in "
            "span(U) carries no data variance)"
        ) from exc
    return fitted_t.T.copy()


def _step_change(metric: StopMetric, new: np.ndarray, prev: np.ndarray) -> float:
    if metric is StopMetric.RAW_BASIS_DIFFERENCE:
        return frobenius_norm(new - prev)
    return projector_distance(new, prev)


def _run(
    advance,
    U0: np.ndarray,
    settings: IterationSettings,
    oracle_basis: np.ndarray | None,
    oracle_spectrum,
) -> SubspaceResult:
    U = as_basis(U0)
    d = U.shape[1]
    if oracle_basis is not None:
        oracle_basis = as_basis(oracle_basis)
        check = check_condition(U, oracle_basis)
        if not check.satisfied:
            warnings.warn(
                "initial basis fails the rank condition against the oracle "
                f"subspace (smallest cosine {check.smallest_cosine:.3e}); the "
                "iteration may converge to a non-leading invariant subspace",
                ConditionWarning,
                stacklevel=3,
            )
    degenerate = (
        spectral_gap_degenerate(oracle_spectrum, d)
        if oracle_spectrum is not None
        else None
    )
    steps: list[TraceStep] = []
    initial = U if settings.record_trace else None
    terminated = Terminated.MAX_ITER
    iterations = settings.max_iter
    for k in range(1, settings.max_iter + 1):
        U_new = advance(U)
        change = _step_change(settings.stop_metric, U_new, U)
        if settings.record_trace:
            steps.append(
                TraceStep(
                    k=k,
                    basis=U_new,
                    step_change=change,
                    oracle_error=(
                        subspace_distance(U_new, oracle_basis)
                        if oracle_basis is not None
                        else None
                    ),
                )
            )
        U = U_new
        if change < settings.eps:
            terminated = Terminated.CONVERGED
            iterations = k
            break
    return SubspaceResult(
        basis=U,
        iterations=iterations,
        terminated=terminated,
        trace=IterationTrace(steps=tuple(steps), initial_basis=initial),
        degenerate_gap=degenerate,
    )


def subspace_iteration(
    S,
    U0,
    settings: IterationSettings | None = None,
    *,
    oracle_basis=None,
    oracle_spectrum=None,
) -> SubspaceResult:
    """Iterate Z = S V, V = orthonormalize(Z) until the change drops below eps.

    For symmetric S with an eigengap after position d, the span converges
    geometrically to the top-d eigenspace provided the start satisfies the
    rank condition. When ``oracle_basis`` is supplied the condition is
    checked at entry (advisory warning only, since the run may still be of
    interest) and every recorded step carries its distance to the oracle;
    ``oracle_spectrum`` additionally sets the gap-degeneracy flag.
    """
    S = as_symmetric(S)
    settings = settings or IterationSettings()
    U0 = as_basis(U0)
    if U0.shape[0] != S.shape[0]:
        raise DimensionMismatch(
            f"basis lives in R^{U0.shape[0]} but operator acts on R^{S.shape[0]}"
        )
    return _run(
        lambda U: gram_schmidt(S @ U), U0, settings, oracle_basis, oracle_spectrum
    )


def power_iteration(
    S,
    u0,
    settings: IterationSettings | None = None,
    *,
    oracle_basis=None,
    oracle_spectrum=None,
) -> SubspaceResult:
    """Apply S and renormalize until the direction stops moving (d = 1).

    ``u0`` is a unit vector; the result's basis is a p x 1 column. This is
    exactly ``subspace_iteration`` with a one-column basis: Gram-Schmidt on
    a single column is plain normalization.
    """
    v = np.asarray(u0, dtype=float).ravel()
    norm = float(np.sqrt(v @ v))
    if abs(norm - 1.0) > TOL.unit_norm_abs:
        raise NotUnit(f"start vector norm {norm!r} is not 1 within {TOL.unit_norm_abs}")
    return subspace_iteration(
        S,
        v[:, None],
        settings,
        oracle_basis=oracle_basis,
        oracle_spectrum=oracle_spectrum,
    )


def ls2pc(
    R,
    U0,
    settings: IterationSettings | None = None,
    *,
    oracle_basis=None,
    oracle_spectrum=None,
) -> SubspaceResult:
    """Iterated least-squares estimation of the leading principal subspace.

    Each pass projects the samples onto the current basis, refits them by
    ordinary least squares (``least_squares_step``) and orthonormalizes the
    fitted frame; the span converges to the top-d principal subspace of the
    data under the rank condition and a sigma_d > sigma_{d+1} gap.

    The data matrix should be wide (N > p) for the usual convergence
    guarantees; narrower matrices are accepted and iterate fine whenever
    X X^T stays positive definite, but the leading-subspace interpretation
    is the caller's responsibility. No centering is applied here: callers
    with non-zero-mean data must center beforehand.

    Raises
    ------
    ConditionViolated
        propagated from ``least_squares_step`` when the rank condition
        fails hard (X X^T singular). Hitting the iteration cap is reported
        in the result, not raised.
    """
    A = as_data_matrix(R)
    settings = settings or IterationSettings()
    U0 = as_basis(U0)
    if U0.shape[0] != A.shape[0]:
        raise DimensionMismatch(
            f"basis lives in R^{U0.shape[0]} but data lives in R^{A.shape[0]}"
        )
    return _run(
        lambda U: gram_schmidt(least_squares_step(A, U)),
        U0,
        settings,
        oracle_basis,
        oracle_spectrum,
    )


def run_paired(R, U0, k_max: int) -> list[float]:
    """Run the least-squares and subspace iterations in lockstep and measure drift.

    Both sequences start from the same U0; the least-squares route advances
    on R, the subspace route on S = R R^T. Returns the k_max + 1 subspace
    distances sin(theta_max) between the two spans at k = 0..k_max; in
    exact arithmetic every entry is zero.
    """
    A = as_data_matrix(R)
    U_ls = as_basis(U0)
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    if U_ls.shape[0] != A.shape[0]:
        raise DimensionMismatch(
            f"basis lives in R^{U_ls.shape[0]} but data lives in R^{A.shape[0]}"
        )
    S = A @ A.T
    S = 0.5 * (S + S.T)
    U_si = U_ls
    distances = [subspace_distance(U_ls, U_si)]
    for _ in range(k_max):
        U_ls = gram_schmidt(least_squares_step(A, U_ls))
        U_si = gram_schmidt(S @ U_si)
        distances.append(subspace_distance(U_ls, U_si))
    return distances
