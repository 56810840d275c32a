"""Ground-truth principal component quantities and their cross-checks.

The two classical characterizations of a principal direction — it maximizes
the summed squared projections, and it minimizes the summed squared
point-to-line distances — are implemented side by side so each can verify
the other. The canonical objective throughout is the unnormalized sum
sum_i <w, r_i>^2 = ||w^T R||^2; dividing by N gives the sample variance,
and the eigenvalues of ``covariance`` are exactly the squared singular
values over N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense_core import (
    DimensionMismatch,
    _freeze,
    as_data_matrix,
    frobenius_norm,
    jacobi_eigh,
    spectral_gap_degenerate,
)
from .errors import NotUnit, SelfCheckFailed
from .tolerances import TOL


def covariance(R) -> np.ndarray:
    """Sample covariance R R^T / N, symmetrized against rounding."""
    A = as_data_matrix(R)
    C = A @ A.T / A.shape[1]
    return _freeze(0.5 * (C + C.T))


@dataclass(frozen=True)
class PcaResult:
    """Top-d principal basis plus the full singular spectrum of the data.

    ``singular_values`` has length p (square roots of the eigenvalues of
    R R^T, i.e. singular values of R); ``degenerate_gap`` is True when
    sigma_d ties sigma_{d+1}, in which case the subspace is not unique.
    """

    basis: np.ndarray
    singular_values: np.ndarray
    degenerate_gap: bool


def pca_topd(R, d: int) -> PcaResult:
    """Leading d-dimensional principal subspace via the Jacobi eigensolver.

    Diagonalizes R R^T (not divided by N); eigenvalues convert to singular
    values of R by a square root, clamped at zero against rounding.
    """
    A = as_data_matrix(R)
    p = A.shape[0]
    if not 1 <= d <= p:
        raise DimensionMismatch(f"need 1 <= d <= p, got d={d}, p={p}")
    S = A @ A.T
    lam, V = jacobi_eigh(0.5 * (S + S.T))
    singular_values = _freeze(np.sqrt(np.clip(lam, 0.0, None)))
    return PcaResult(
        basis=V[:, :d],
        singular_values=singular_values,
        degenerate_gap=spectral_gap_degenerate(singular_values, d),
    )


def _as_unit_direction(w, p: int) -> np.ndarray:
    v = np.asarray(w, dtype=float).ravel()
    if v.shape[0] != p:
        raise DimensionMismatch(f"direction has length {v.shape[0]}, expected {p}")
    norm = float(np.sqrt(v @ v))
    if abs(norm - 1.0) > TOL.unit_norm_abs:
        raise NotUnit(f"direction norm {norm!r} is not 1 within {TOL.unit_norm_abs}")
    return v


def variance_along(R, w) -> float:
    """Summed squared projections ||w^T R||^2 = sum_i <w, r_i>^2 (unit w)."""
    A = as_data_matrix(R)
    v = _as_unit_direction(w, A.shape[0])
    proj = v @ A
    return float(proj @ proj)


def sum_sq_distances(R, w) -> float:
    """Summed squared distances from the samples to the line spanned by unit w.

    Computed directly as sum_i ||r_i - <w, r_i> w||^2 and, as a runtime
    self-check, also via the complement identity ||R||_F^2 - ||w^T R||^2;
    the two must agree to ``identity_check_rel`` relative to ||R||_F^2.
    The directly computed sum is returned.
    """
    A = as_data_matrix(R)
    v = _as_unit_direction(w, A.shape[0])
    proj = v @ A
    residual = A - np.outer(v, proj)
    direct = float((residual * residual).sum())
    total = float((A * A).sum())
    complement = total - float(proj @ proj)
    if abs(direct - complement) > TOL.identity_check_rel * total:
        raise SelfCheckFailed(
            f"distance sum {direct!r} and complement {complement!r} disagree "
            f"beyond {TOL.identity_check_rel:.1e} * ||R||_F^2"
        )
    return direct


@dataclass(frozen=True)
class PearsonSweep:
    """Result of a brute-force direction sweep on 2-D data.

    ``argmax_index``/``argmax_angle`` locate the grid direction of maximal
    summed squared projection; ``argmin_*`` the direction of minimal summed
    squared distance (first index wins ties). ``max_gap`` is the largest
    |variance + distance - ||R||_F^2| seen anywhere on the grid, and
    ``degenerate`` flags an isotropic cloud whose objective is flat.
    """

    grid_n: int
    argmax_index: int
    argmax_angle: float
    argmin_index: int
    argmin_angle: float
    max_gap: float
    degenerate: bool


def pearson_equivalence_2d(R, grid_n: int, chunk: int = 16384) -> PearsonSweep:
    """Sweep w(theta) = (cos theta, sin theta) over grid_n angles in [0, pi).

    For every grid direction the projection objective is accumulated
    per-sample and the distance objective from explicit residual vectors,
    so the sweep is a genuine brute-force check of both characterizations
    rather than an application of the complement identity. Evaluation is
    chunked; results are independent of the chunk size.
    """
    A = as_data_matrix(R)
    if A.shape[0] != 2:
        raise DimensionMismatch(f"sweep is defined for p=2 only, got p={A.shape[0]}")
    if grid_n < 3:
        raise ValueError(f"grid_n must be >= 3, got {grid_n}")
    total = float((A * A).sum())
    best_var = -np.inf
    best_var_idx = -1
    worst_var = np.inf
    best_dist = np.inf
    best_dist_idx = -1
    max_gap = 0.0
    for start in range(0, grid_n, chunk):
        idx = np.arange(start, min(start + chunk, grid_n))
        theta = idx * (np.pi / grid_n)
        cos_t = np.cos(theta)[:, None]
        sin_t = np.sin(theta)[:, None]
        proj = cos_t * A[0][None, :] + sin_t * A[1][None, :]
        var = (proj * proj).sum(axis=1)
        res_x = A[0][None, :] - proj * cos_t
        res_y = A[1][None, :] - proj * sin_t
        dist = (res_x * res_x + res_y * res_y).sum(axis=1)
        gap = float(np.abs(var + dist - total).max())
        max_gap = max(max_gap, gap)
        i = int(np.argmax(var))
        if var[i] > best_var:
            best_var = float(var[i])
            best_var_idx = int(idx[i])
        worst_var = min(worst_var, float(var.min()))
        i = int(np.argmin(dist))
        if dist[i] < best_dist:
            best_dist = float(dist[i])
            best_dist_idx = int(idx[i])
    spread = best_var - worst_var
    return PearsonSweep(
        grid_n=grid_n,
        argmax_index=best_var_idx,
        argmax_angle=best_var_idx * np.pi / grid_n,
        argmin_index=best_dist_idx,
        argmin_angle=best_dist_idx * np.pi / grid_n,
        max_gap=max_gap,
        degenerate=spread <= TOL.isotropic_objective_rel * total,
    )
