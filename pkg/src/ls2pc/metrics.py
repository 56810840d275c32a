"""Convergence-error sequences and geometric-rate estimation.

For a run with an eigengap, the per-iteration subspace error to the true
leading subspace shrinks by an (asymptotically) constant factor; the
estimator below fits that factor as the geometric mean of successive error
ratios over a window, which matches a log-linear fit in expectation while
staying readable next to the returned per-step ratios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense_core import DimensionMismatch, as_basis, subspace_distance
from .errors import WindowAtFloor
from .iterations import IterationTrace
from .tolerances import TOL


def error_sequence(trace: IterationTrace, reference) -> list[float]:
    """Subspace errors sin(theta_max) to ``reference`` at k = 0..iterations.

    Entry 0 is the error of the basis the run started from; entry k the
    error after step k. Requires a trace recorded with bases.
    """
    ref = as_basis(reference)
    if trace.initial_basis is None or any(s.basis is None for s in trace.steps):
        raise ValueError("trace was not recorded with bases (record_trace=False?)")
    if trace.initial_basis.shape != ref.shape:
        raise DimensionMismatch(
            f"reference of shape {ref.shape} does not match trace bases of "
            f"shape {trace.initial_basis.shape}"
        )
    errors = [subspace_distance(trace.initial_basis, ref)]
    errors.extend(subspace_distance(step.basis, ref) for step in trace.steps)
    return errors


@dataclass(frozen=True)
class RateEstimate:
    """Fitted per-iteration contraction factor plus the raw step ratios."""

    ratio_geometric_mean: float
    per_step_ratios: tuple[float, ...]


def clip_window_to_floor(
    errors, k_lo: int, k_hi: int, floor: float | None = None
) -> tuple[int, int]:
    """Shrink [k_lo, k_hi] so every error in it stays above the noise floor.

    Returns the largest k_hi' <= k_hi (also clipped to the last index of
    ``errors``) such that errors[k_lo..k_hi'] all exceed 100x the floor.

    Raises
    ------
    WindowAtFloor
        if no window of at least two points survives.
    """
    e = np.asarray(errors, dtype=float)
    threshold = 100.0 * (TOL.error_floor if floor is None else floor)
    hi = min(k_hi, e.size - 1)
    if k_lo < 0 or k_lo >= hi:
        raise WindowAtFloor(
            f"window [{k_lo}, {k_hi}] has no usable span in a sequence of "
            f"length {e.size}"
        )
    k = k_lo
    while k + 1 <= hi and e[k + 1] > threshold:
        k += 1
    if e[k_lo] <= threshold or k == k_lo:
        raise WindowAtFloor(
            f"errors reach the numerical floor ({threshold:.1e}) inside "
            f"[{k_lo}, {k_hi}]; nothing left to fit"
        )
    return k_lo, k


def estimate_rate(errors, k_lo: int = 5, k_hi: int = 25) -> RateEstimate:
    """Geometric-mean contraction factor of ``errors`` over [k_lo, k_hi].

    The window must lie inside the sequence, satisfy k_lo < k_hi, and stay
    above 100x the error floor everywhere (use ``clip_window_to_floor``
    first when the tail may have bottomed out). Invariant under uniform
    scaling of the error sequence.
    """
    e = np.asarray(errors, dtype=float)
    if not k_lo < k_hi:
        raise ValueError(f"need k_lo < k_hi, got [{k_lo}, {k_hi}]")
    if k_lo < 0 or k_hi >= e.size:
        raise ValueError(
            f"window [{k_lo}, {k_hi}] out of range for {e.size} errors"
        )
    window = e[k_lo : k_hi + 1]
    if (window <= 100.0 * TOL.error_floor).any():
        raise WindowAtFloor(
            f"window [{k_lo}, {k_hi}] contains errors at the numerical floor; "
            "shrink it (see clip_window_to_floor)"
        )
    ratios = window[1:] / window[:-1]
    return RateEstimate(
        ratio_geometric_mean=float(np.exp(np.mean(np.log(ratios)))),
        per_step_ratios=tuple(float(r) for r in ratios),
    )
