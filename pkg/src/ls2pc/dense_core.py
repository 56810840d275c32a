"""Dense linear-algebra kernels and subspace geometry.

Everything the iterative algorithms stand on: validated array types,
modified Gram-Schmidt orthonormalization, a Cholesky SPD solver, a cyclic
Jacobi symmetric eigensolver (the ground-truth oracle for all subspace
comparisons), and canonical-angle measures between subspaces.

The decompositions are implemented here directly rather than delegated to
LAPACK-backed wrappers, so the oracle used to judge the iterative
algorithms shares no code path with them. numpy supplies array storage and
elementwise/matrix arithmetic only.

Array conventions
-----------------
data matrix   R : (p, N), column i is sample r_i, N samples in R^p
basis         U : (p, d), orthonormal columns, 1 <= d <= p
symmetric     S : (p, p), ||S - S^T||_F <= tol * ||S||_F
spectrum        : 1-D, nonincreasing, nonnegative (singular-value semantics)

All constructors return arrays marked read-only; treat every value as
immutable after construction.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotPositiveDefinite,
    RankDeficient,
)
from .tolerances import TOL


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


# ---------------------------------------------------------------------------
# validated types


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if A.size and not np.isfinite(A).all():
        raise ValueError(f"{name} contains non-finite entries")
    return A


def as_data_matrix(R) -> np.ndarray:
    """Validate a (p, N) sample matrix: finite, p >= 1, N >= 1."""
    A = as_matrix(R, "data matrix")
    p, n = A.shape
    if p < 1 or n < 1:
        raise DimensionMismatch(f"data matrix needs p >= 1 and N >= 1, got {p}x{n}")
    return A


def as_symmetric(S) -> np.ndarray:
    """Validate symmetry to ``symmetry_rel`` and return the symmetrized copy."""
    A = as_matrix(S, "symmetric matrix")
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"symmetric matrix must be square, got {A.shape}")
    scale = frobenius_norm(A)
    if frobenius_norm(A - A.T) > TOL.symmetry_rel * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    return 0.5 * (A + A.T)


def as_basis(U) -> np.ndarray:
    """Validate a (p, d) matrix with orthonormal columns, 1 <= d <= p."""
    A = as_matrix(U, "basis")
    p, d = A.shape
    if not 1 <= d <= p:
        raise DimensionMismatch(f"basis needs 1 <= d <= p, got {p}x{d}")
    if frobenius_norm(A.T @ A - np.eye(d)) > TOL.orthonormality_rel * d:
        raise ValueError("basis columns are not orthonormal within tolerance")
    return A


def as_spectrum(values) -> np.ndarray:
    """Validate a nonincreasing, nonnegative 1-D value sequence."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise DimensionMismatch("spectrum must be non-empty")
    if not np.isfinite(v).all():
        raise ValueError("spectrum contains non-finite entries")
    if (v < 0).any():
        raise ValueError("spectrum entries must be nonnegative")
    if (np.diff(v) > 0).any():
        raise ValueError("spectrum must be nonincreasing")
    return v


def spectral_gap_degenerate(spectrum, d: int, rel_tol: float | None = None) -> bool:
    """True when sigma_d and sigma_{d+1} coincide to ``rel_tol`` (relative).

    A tied gap means the d-dimensional leading subspace is not unique. For
    d equal to the full length there is no sigma_{d+1} and the subspace is
    the whole space, so the answer is False.
    """
    s = as_spectrum(spectrum)
    if not 1 <= d <= s.size:
        raise DimensionMismatch(f"d={d} out of range for spectrum of length {s.size}")
    if d == s.size:
        return False
    tol = TOL.degenerate_gap_rel if rel_tol is None else rel_tol
    lead, trail = float(s[d - 1]), float(s[d])
    if lead == 0.0:
        return True
    return (lead - trail) / lead < tol


# ---------------------------------------------------------------------------
# elementary operations


def frobenius_norm(M) -> float:
    A = np.asarray(M, dtype=float)
    return float(np.sqrt((A * A).sum()))


def matmul(A, B) -> np.ndarray:
    A = as_matrix(A, "left operand")
    B = as_matrix(B, "right operand")
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def matvec(A, x) -> np.ndarray:
    A = as_matrix(A, "matrix")
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"cannot apply {A.shape} to vector of shape {v.shape}")
    return A @ v


def transpose(M) -> np.ndarray:
    return as_matrix(M).T.copy()


# ---------------------------------------------------------------------------
# orthonormalization


def gram_schmidt(M, pivot_tol: float | None = None) -> np.ndarray:
    """Orthonormalize the columns of M.

    Modified Gram-Schmidt with one full reorthogonalization pass, which
    holds ||Q^T Q - I|| at machine level even for ill-conditioned input
    where a single classical pass would drift. The triangular factor's
    diagonal (the residual norms used as divisors) is positive, which fixes
    every output column's sign and makes the result deterministic.

    Parameters
    ----------
    M : (p, d) array with linearly independent columns, d <= p
    pivot_tol : relative pivot threshold, default ``TOL.gram_schmidt_pivot_rel``

    Returns
    -------
    (p, d) read-only array with orthonormal columns spanning Col(M).

    Raises
    ------
    RankDeficient
        if any column's residual norm falls to pivot_tol * ||M||_F.
    """
    A = as_matrix(M)
    p, d = A.shape
    if not 1 <= d <= p:
        raise DimensionMismatch(f"need 1 <= d <= p to orthonormalize, got {p}x{d}")
    tol = TOL.gram_schmidt_pivot_rel if pivot_tol is None else pivot_tol
    scale = frobenius_norm(A)
    Q = A.copy()
    for j in range(d):
        v = Q[:, j]
        for _ in range(2):
            for i in range(j):
                v -= (Q[:, i] @ v) * Q[:, i]
        pivot = math.sqrt(v @ v)
        if pivot <= tol * scale:
            raise RankDeficient(
                f"column {j} is numerically dependent on its predecessors "
                f"(pivot {pivot:.3e} <= {tol:.1e} * ||M||_F)"
            )
        Q[:, j] = v / pivot
    return _freeze(Q)


# ---------------------------------------------------------------------------
# SPD solve


def cholesky_spd(S, pivot_tol: float | None = None) -> np.ndarray:
    """Lower-triangular Cholesky factor L with S = L L^T.

    Raises NotPositiveDefinite when a pivot drops below
    pivot_tol * trace(S)/d, the numerical signature of a singular or
    indefinite matrix.
    """
    A = as_symmetric(S)
    d = A.shape[0]
    tol = TOL.cholesky_pivot_rel if pivot_tol is None else pivot_tol
    floor = tol * max(float(np.trace(A)), 0.0) / d
    L = np.zeros_like(A)
    for j in range(d):
        pivot = A[j, j] - L[j, :j] @ L[j, :j]
        if pivot <= 0.0 or pivot < floor:
            raise NotPositiveDefinite(
                f"Cholesky pivot {pivot:.3e} at column {j} below floor {floor:.3e}"
            )
        L[j, j] = math.sqrt(pivot)
        if j + 1 < d:
            L[j + 1 :, j] = (A[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def solve_spd(S, B) -> np.ndarray:
    """Solve S @ W = B for symmetric positive definite S.

    Cholesky factorization followed by forward/back substitution. B may be
    a vector or a (d, m) matrix; the result has B's shape.
    """
    L = cholesky_spd(S)
    A = np.asarray(B, dtype=float)
    vector = A.ndim == 1
    if vector:
        A = A[:, None]
    if A.ndim != 2 or A.shape[0] != L.shape[0]:
        raise DimensionMismatch(
            f"right-hand side of shape {np.shape(B)} does not match system of size {L.shape[0]}"
        )
    d = L.shape[0]
    Y = np.empty_like(A)
    for i in range(d):
        Y[i] = (A[i] - L[i, :i] @ Y[:i]) / L[i, i]
    W = np.empty_like(A)
    for i in reversed(range(d)):
        W[i] = (Y[i] - L[i + 1 :, i] @ W[i + 1 :]) / L[i, i]
    return W[:, 0] if vector else W


# ---------------------------------------------------------------------------
# symmetric eigensolver (the oracle)


def _offdiag_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return frobenius_norm(off)


def jacobi_eigh(
    S, off_tol: float | None = None, max_sweeps: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Each sweep visits every strictly-upper entry once and annihilates it
    with a plane rotation; the off-diagonal Frobenius mass shrinks at least
    quadratically once small. Sweeping stops when that mass falls to
    off_tol * ||S||_F.

    Returns
    -------
    (eigenvalues, V) : eigenvalues sorted nonincreasing, V's columns the
        matching orthonormal eigenvectors, both read-only, with
        ||S V - V diag(eigenvalues)||_F <= ~off_tol * ||S||_F.

    Raises
    ------
    NoConvergence
        if the threshold is not met within max_sweeps sweeps (default 50).
    """
    A = as_symmetric(S)
    n = A.shape[0]
    tol = TOL.jacobi_off_rel if off_tol is None else off_tol
    sweeps = TOL.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    scale = frobenius_norm(A)
    V = np.eye(n)
    converged = scale == 0.0 or n == 1
    for _ in range(sweeps):
        if converged or _offdiag_norm(A) <= tol * scale:
            converged = True
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                a_ij = A[i, j]
                if a_ij == 0.0:
                    continue
                theta = 0.5 * (A[j, j] - A[i, i]) / a_ij
                if abs(theta) > 1e12:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.sqrt(1.0 + theta * theta)
                    )
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_i, col_j = A[:, i].copy(), A[:, j].copy()
                A[:, i] = c * col_i - s * col_j
                A[:, j] = s * col_i + c * col_j
                row_i, row_j = A[i, :].copy(), A[j, :].copy()
                A[i, :] = c * row_i - s * row_j
                A[j, :] = s * row_i + c * row_j
                A[i, j] = A[j, i] = 0.0
                v_i, v_j = V[:, i].copy(), V[:, j].copy()
                V[:, i] = c * v_i - s * v_j
                V[:, j] = s * v_i + c * v_j
    if not converged and _offdiag_norm(A) > tol * scale:
        raise NoConvergence(
            f"off-diagonal mass {_offdiag_norm(A):.3e} above {tol:.1e} * ||S||_F "
            f"after {sweeps} sweeps"
        )
    values = np.diag(A).copy()
    order = np.argsort(-values, kind="stable")
    return _freeze(values[order]), _freeze(np.ascontiguousarray(V[:, order]))


# ---------------------------------------------------------------------------
# subspace geometry


def principal_angles(U, V) -> np.ndarray:
    """Canonical angles between span(U) and span(V), nondecreasing in [0, pi/2].

    cos(theta_i) are the singular values of U^T V clamped to [0, 1],
    obtained here from the eigenvalues of (U^T V)^T (U^T V). The cosine
    route loses resolution below ~1e-8 rad; use subspace_distance when the
    largest angle's *sine* is the quantity of interest.
    """
    U = as_basis(U)
    V = as_basis(V)
    if U.shape != V.shape:
        raise DimensionMismatch(f"bases of shape {U.shape} and {V.shape} differ")
    G = U.T @ V
    lam, _ = jacobi_eigh(G.T @ G)
    cosines = np.sqrt(np.clip(lam, 0.0, 1.0))
    return _freeze(np.arccos(cosines))


def subspace_distance(U, V) -> float:
    """sin of the largest canonical angle between span(U) and span(V).

    Computed as the largest singular value of (I - U U^T) V, i.e. from the
    residual of V against span(U). Unlike sqrt(1 - cos^2) this keeps full
    relative accuracy for nearly coincident subspaces, which the
    convergence measurements rely on. Symmetric in its arguments.
    """
    U = as_basis(U)
    V = as_basis(V)
    if U.shape != V.shape:
        raise DimensionMismatch(f"bases of shape {U.shape} and {V.shape} differ")
    p, d = U.shape
    if d == p:
        return 0.0
    W = V - U @ (U.T @ V)
    lam, _ = jacobi_eigh(W.T @ W)
    return float(np.sqrt(np.clip(lam[0], 0.0, 1.0)))


def projector_distance(U, V) -> float:
    """|| U U^T - V V^T ||_F / sqrt(2), a basis-invariant subspace change.

    Equals sqrt(sum_i sin^2 theta_i) for equal-dimension subspaces; used as
    the default iteration stopping metric because it cannot be inflated by
    a rotation within the span.
    """
    U = as_basis(U)
    V = as_basis(V)
    if U.shape[0] != V.shape[0]:
        raise DimensionMismatch(f"bases live in R^{U.shape[0]} and R^{V.shape[0]}")
    return frobenius_norm(U @ U.T - V @ V.T) / math.sqrt(2.0)
