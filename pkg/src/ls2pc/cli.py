"""Command-line interface: generate instances, fit subspaces, verify the
least-squares/subspace-iteration equivalence, and fit convergence rates.

CSV in (rows are samples), JSON out. Every JSON document carries a
"schema": 1 marker and, unless --no-timestamp is given, a UTC timestamp;
all other content is a pure function of the flags and input files, so
repeated runs are byte-identical.

Exit codes: 0 success (and, for compare/rate, check passed); 1 check
failed or runtime error; 2 usage or input-parse error; 3 rank condition
violated; 4 degenerate spectral gap or rate window at the noise floor.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .datagen import GenSpec, generate_with_spectrum, random_orthonormal
from .dense_core import as_basis, spectral_gap_degenerate
from .errors import ConditionViolated, LinAlgError, WindowAtFloor
from .iterations import (
    IterationSettings,
    StopMetric,
    check_condition,
    ls2pc,
    power_iteration,
    run_paired,
    subspace_iteration,
)
from .metrics import clip_window_to_floor, error_sequence, estimate_rate
from .pca_oracle import pca_topd
from .tolerances import TOL

_SEED_ENV = "LS2PC_SEED"


def _resolve_seed(flag_value: int | None) -> int:
    # documented precedence: flag > LS2PC_SEED env > default 0
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(_SEED_ENV)
    if raw is not None:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{_SEED_ENV} must be an integer, got {raw!r}") from None
    return 0


def _read_csv_matrix(path: str) -> np.ndarray:
    """Parse a CSV of floats; a non-numeric first row is taken as a header."""
    try:
        with open(path, newline="") as fh:
            raw = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise ValueError(f"{path} is empty")
    start = 0
    try:
        [float(x) for x in raw[0]]
    except ValueError:
        start = 1
    if start == len(raw):
        raise ValueError(f"{path} has a header but no data rows")
    width = len(raw[start])
    rows = []
    for lineno, row in enumerate(raw[start:], start + 1):
        if len(row) != width:
            raise ValueError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
        try:
            rows.append([float(x) for x in row])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return np.asarray(rows, dtype=float)


def _load_samples(args) -> np.ndarray:
    """Read the input CSV (N rows of p columns) into the internal (p, N) layout."""
    table = _read_csv_matrix(args.input)
    n, p = table.shape
    if n <= p:
        raise ValueError(
            f"{args.input}: need more samples than dimensions (N > p), got N={n}, p={p}"
        )
    R = table.T
    if getattr(args, "center", False):
        R = R - R.mean(axis=1, keepdims=True)
    return R


def _write_csv(path: Path, table: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        for row in table:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def _meta_path(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".meta.json")


def _load_meta(csv_path: str) -> dict | None:
    path = _meta_path(csv_path)
    if not path.exists():
        return None
    with open(path) as fh:
        return json.load(fh)


def _document(args, body: dict) -> dict:
    doc: dict = {"schema": 1}
    if not args.no_timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc.update(body)
    return doc


def _emit(args, doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _matrix_rows(M: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in row] for row in M]


def _initial_basis(args, p: int, d: int) -> tuple[np.ndarray, int | None]:
    if getattr(args, "u0", None):
        U0 = as_basis(_read_csv_matrix(args.u0))
        if U0.shape != (p, d):
            raise ValueError(
                f"{args.u0}: initial basis must be {p}x{d}, got {U0.shape[0]}x{U0.shape[1]}"
            )
        return U0, None
    seed = _resolve_seed(args.seed)
    return random_orthonormal(p, d, seed), seed


def cmd_generate(args) -> int:
    try:
        spectrum = tuple(float(s) for s in args.spectrum.split(","))
    except ValueError:
        raise ValueError(f"--spectrum must be comma-separated floats, got {args.spectrum!r}")
    gen = GenSpec(p=args.p, n=args.n, spectrum=spectrum, seed=_resolve_seed(args.seed))
    inst = generate_with_spectrum(gen)
    out = Path(args.out)
    _write_csv(out, inst.data.T)
    meta = _document(
        args,
        {
            "spec": {
                "p": gen.p,
                "n": gen.n,
                "seed": gen.seed,
                "spectrum": list(gen.spectrum),
            },
            "principal_basis": _matrix_rows(inst.principal_basis),
        },
    )
    _meta_path(out).write_text(json.dumps(meta, indent=2) + "\n")
    return 0


def _validate_d(d: int, p: int) -> None:
    if not 1 <= d <= p:
        raise ValueError(f"need 1 <= d <= p, got d={d}, p={p}")


def cmd_fit(args) -> int:
    R = _load_samples(args)
    p = R.shape[0]
    _validate_d(args.d, p)
    if args.algorithm == "power" and args.d != 1:
        raise ValueError(f"--algorithm power estimates a single direction; use --d 1 (got {args.d})")
    U0, seed = _initial_basis(args, p, args.d)
    settings = IterationSettings(
        eps=args.eps,
        max_iter=args.max_iter,
        stop_metric=StopMetric(args.stop_metric),
        record_trace=True,
    )
    oracle_basis = oracle_spectrum = None
    if args.oracle:
        oracle = pca_topd(R, args.d)
        oracle_basis = oracle.basis
        oracle_spectrum = oracle.singular_values
    if args.algorithm == "ls2pc":
        result = ls2pc(
            R, U0, settings, oracle_basis=oracle_basis, oracle_spectrum=oracle_spectrum
        )
    else:
        S = R @ R.T
        S = 0.5 * (S + S.T)
        if args.algorithm == "power":
            result = power_iteration(
                S,
                U0[:, 0],
                settings,
                oracle_basis=oracle_basis,
                oracle_spectrum=oracle_spectrum,
            )
        else:
            result = subspace_iteration(
                S, U0, settings, oracle_basis=oracle_basis, oracle_spectrum=oracle_spectrum
            )
    meta = _load_meta(args.input)
    trace_rows = []
    for step in result.trace.steps:
        row: dict = {"k": step.k, "step_change": step.step_change}
        if step.oracle_error is not None:
            row["oracle_error"] = step.oracle_error
        trace_rows.append(row)
    doc = _document(
        args,
        {
            "spec": meta.get("spec") if meta else None,
            "settings": {
                "algorithm": args.algorithm,
                "d": args.d,
                "eps": args.eps,
                "max_iter": args.max_iter,
                "stop_metric": args.stop_metric,
                "center": args.center,
                "seed": seed,
                "u0": args.u0,
                "oracle": args.oracle,
            },
            "result": {
                "basis": _matrix_rows(result.basis),
                "iterations": result.iterations,
                "terminated": result.terminated.value,
                "degenerate_gap": result.degenerate_gap,
            },
            "trace": trace_rows,
        },
    )
    _emit(args, doc)
    return 0


def cmd_compare(args) -> int:
    R = _load_samples(args)
    p = R.shape[0]
    _validate_d(args.d, p)
    if args.k < 0:
        raise ValueError(f"--k must be >= 0, got {args.k}")
    U0, seed = _initial_basis(args, p, args.d)
    oracle = pca_topd(R, args.d)
    cond = check_condition(U0, oracle.basis)
    if not cond.satisfied:
        print(
            "error: initial basis violates the rank condition rank(U0^T Ud) = d "
            f"(smallest cosine {cond.smallest_cosine:.3e} <= {TOL.condition_min_cosine:.1e}); "
            "the two iterations are only provably equivalent under that condition",
            file=sys.stderr,
        )
        return 3
    distances = run_paired(R, U0, args.k)
    max_distance = max(distances)
    equivalent = max_distance <= TOL.paired_equivalence
    doc = _document(
        args,
        {
            "spec": (_load_meta(args.input) or {}).get("spec"),
            "settings": {"d": args.d, "k": args.k, "seed": seed, "u0": args.u0,
                         "center": args.center},
            "distances": [float(x) for x in distances],
            "max_distance": float(max_distance),
            "threshold": TOL.paired_equivalence,
            "equivalent": equivalent,
        },
    )
    _emit(args, doc)
    return 0 if equivalent else 1


def cmd_rate(args) -> int:
    R = _load_samples(args)
    p = R.shape[0]
    _validate_d(args.d, p)
    oracle = pca_topd(R, args.d)
    meta = _load_meta(args.input)
    if args.predicted is not None:
        predicted = args.predicted
        spectrum = oracle.singular_values
    elif meta and meta.get("spec", {}).get("spectrum"):
        spectrum = np.asarray(meta["spec"]["spectrum"], dtype=float)
        predicted = None
    else:
        raise ValueError(
            f"no {_meta_path(args.input).name} with a prescribed spectrum next to "
            f"{args.input}; pass --predicted to supply the expected ratio"
        )
    if args.d >= len(spectrum):
        print(
            f"error: d={args.d} leaves no sigma_{args.d + 1}; a convergence rate "
            "needs a spectral gap below the subspace",
            file=sys.stderr,
        )
        return 4
    if spectral_gap_degenerate(spectrum, args.d):
        print(
            f"error: sigma_{args.d} and sigma_{args.d + 1} are degenerate (no spectral "
            "gap); the convergence rate is undefined for a tied subspace",
            file=sys.stderr,
        )
        return 4
    if predicted is None:
        predicted = float((spectrum[args.d] / spectrum[args.d - 1]) ** 2)
    U0, seed = _initial_basis(args, p, args.d)
    settings = IterationSettings(eps=args.eps, max_iter=args.max_iter, record_trace=True)
    result = ls2pc(R, U0, settings, oracle_basis=oracle.basis,
                   oracle_spectrum=oracle.singular_values)
    errors = error_sequence(result.trace, oracle.basis)
    k_lo, k_hi = clip_window_to_floor(errors, args.k_lo, args.k_hi)
    fit = estimate_rate(errors, k_lo, k_hi)
    within = abs(fit.ratio_geometric_mean - predicted) <= args.band * predicted
    doc = _document(
        args,
        {
            "spec": meta.get("spec") if meta else None,
            "settings": {
                "d": args.d,
                "eps": args.eps,
                "max_iter": args.max_iter,
                "seed": seed,
                "u0": args.u0,
                "center": args.center,
                "band": args.band,
            },
            "predicted": predicted,
            "fitted": fit.ratio_geometric_mean,
            "per_step": list(fit.per_step_ratios),
            "window": {"k_lo": k_lo, "k_hi": k_hi},
            "within_band": bool(within),
        },
    )
    _emit(args, doc)
    return 0 if within else 1


def _add_common(sub: argparse.ArgumentParser, *, needs_input: bool = True) -> None:
    if needs_input:
        sub.add_argument("--input", required=True, help="CSV of samples (rows are samples)")
        sub.add_argument("--center", action="store_true",
                         help="subtract the mean sample before fitting")
        sub.add_argument("--u0", default=None,
                         help="CSV with an explicit p x d orthonormal initial basis")
    sub.add_argument("--seed", type=int, default=None,
                     help=f"seed for the initial basis (default: ${_SEED_ENV} or 0)")
    sub.add_argument("--out", default=None, help="write JSON here instead of stdout")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp field (for byte-identical output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ls2pc",
        description="Estimate leading principal subspaces by iterated least squares; "
        "generate test instances, verify the subspace-iteration equivalence, "
        "and fit convergence rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic CSV with a prescribed spectrum")
    g.add_argument("--p", type=int, required=True, help="ambient dimension")
    g.add_argument("--n", type=int, required=True, help="number of samples (must exceed p)")
    g.add_argument("--spectrum", required=True,
                   help="comma-separated nonincreasing singular values, length p")
    g.add_argument("--seed", type=int, default=None,
                   help=f"generator seed (default: ${_SEED_ENV} or 0)")
    g.add_argument("--out", required=True, help="CSV path; metadata goes to <out>.meta.json")
    g.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp field (for byte-identical output)")
    g.set_defaults(func=cmd_generate)

    f = sub.add_parser("fit", help="fit a d-dimensional subspace to a CSV of samples")
    f.add_argument("--d", type=int, required=True, help="subspace dimension")
    f.add_argument("--algorithm", choices=["ls2pc", "subspace", "power"], default="ls2pc")
    f.add_argument("--eps", type=float, default=1e-10, help="convergence threshold")
    f.add_argument("--max-iter", type=int, default=1000)
    f.add_argument("--stop-metric", choices=[m.value for m in StopMetric],
                   default=StopMetric.PROJECTOR_DISTANCE.value)
    f.add_argument("--oracle", action="store_true",
                   help="also diagonalize R R^T and report per-step oracle errors")
    _add_common(f)
    f.set_defaults(func=cmd_fit)

    c = sub.add_parser("compare",
                       help="run the least-squares and subspace iterations in lockstep")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--k", type=int, default=30, help="number of lockstep iterations")
    _add_common(c)
    c.set_defaults(func=cmd_compare)

    r = sub.add_parser("rate", help="fit the geometric convergence rate against the oracle")
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--k-lo", type=int, default=5, help="first window iteration")
    r.add_argument("--k-hi", type=int, default=25,
                   help="last window iteration (clipped to the pre-floor range)")
    r.add_argument("--eps", type=float, default=1e-12)
    r.add_argument("--max-iter", type=int, default=1000)
    r.add_argument("--predicted", type=float, default=None,
                   help="expected per-step ratio; defaults to (sigma_{d+1}/sigma_d)^2 "
                   "from the instance metadata")
    r.add_argument("--band", type=float, default=0.20,
                   help="accepted relative deviation of fitted from predicted")
    _add_common(r)
    r.set_defaults(func=cmd_rate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConditionViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except WindowAtFloor as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LinAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
