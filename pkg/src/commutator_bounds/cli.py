"""Command-line frontend: comparisons, figure data, Monte Carlo averages, campaigns.

Every command is byte-reproducible for a fixed seed: all randomness flows
through counter-based streams keyed on (seed, command, task index), so the
worker count changes scheduling but never values.  Data goes to the output
stream (stdout by default), diagnostics to stderr; ``CB_LOG`` sets the
diagnostic level.

Exit codes: 0 success; 1 hard-inequality violation or non-converged trials;
2 usage error; 3 conjectured-inequality violation recorded; 4 I/O error;
5 counterexample file written.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from ._parallel import map_ordered, task_rng
from .averages import (
    BOUND_NAMES,
    FIG1_HEADER,
    Moments,
    averaged_bounds_qubit,
    fig1_rows,
    merge_moments,
    qubit_bound_samples,
)
from .bounds import batch_bounds, violation_masks
from .mub import (
    FIG2_HEADER,
    fig2_rows,
    fourier_mub_pair,
    fourier_phases,
    mub_b2_average,
    mub_commutator_norm_average,
    mub_lp_average,
    mub_sample_columns,
    mub_vanishing_check,
)
from .optimizer import matrix_to_pairs, maximize_ratio, result_record
from .states import (
    DensityMatrix,
    sample_density_batch,
    sample_hermitian_batch,
    sample_unit_vectors,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CONJECTURE = 3
EXIT_IO = 4
EXIT_COUNTEREXAMPLE = 5

# Stream-domain tags keeping command seeds disjoint.
_D_COMPARE = 1
_D_MC_PURITY = 2
_D_MC_MUB = 3
_D_CONJECTURE = 4

_BATCH = 4096
_MC_BATCH = 1 << 16

_HARD_NAMES = ("robertson", "schrodinger", "luo_park", "bound1")


def _fmt(x: float) -> str:
    """Shortest round-trip decimal (never more than 17 significant digits)."""
    return repr(float(x))


def _write_lines(out, lines) -> None:
    for line in lines:
        out.write(line)
        out.write("\n")


class _Output:
    """Output stream bound to --out; stdout when the path is '-' or absent."""

    def __init__(self, path: str | None):
        self.path = path
        self.handle = None

    def __enter__(self):
        if self.path in (None, "-"):
            return sys.stdout
        self.handle = open(self.path, "w", encoding="utf-8", newline="")
        return self.handle

    def __exit__(self, *exc):
        if self.handle is not None:
            self.handle.close()
        return False


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


# ---------------------------------------------------------------------------
# compare


def _compare_task(payload):
    seed, dim, batch_index, start, count = payload
    rng = task_rng(seed, _D_COMPARE, dim, batch_index)
    a = sample_hermitian_batch(dim, count, rng)
    b = sample_hermitian_batch(dim, count, rng)
    rho = sample_density_batch(dim, count, rng)
    cols = batch_bounds(a, b, rho)
    masks = violation_masks(cols)
    counterexamples = []
    for i in np.nonzero(masks["bound2"])[0]:
        lam = np.sort(np.linalg.eigvalsh(rho[i]))
        counterexamples.append(
            {
                "index": int(start + i),
                "dim": int(dim),
                "spectrum": [float(x) for x in lam],
                "a": matrix_to_pairs(a[i]),
                "b": matrix_to_pairs(b[i]),
                "rho": matrix_to_pairs(rho[i]),
                "product": float(cols["product"][i]),
                "bound2": float(cols["bound2"][i]),
            }
        )
    return start, cols, masks, counterexamples


def _cmd_compare(args) -> int:
    if args.dim < 2:
        return _usage_error(f"--dim must be >= 2, got {args.dim}")
    if args.samples < 1:
        return _usage_error(f"--samples must be >= 1, got {args.samples}")
    tasks = []
    start = 0
    index = 0
    while start < args.samples:
        count = min(_BATCH, args.samples - start)
        tasks.append((args.seed, args.dim, index, start, count))
        start += count
        index += 1
    results = map_ordered(_compare_task, tasks, args.workers)

    hard_violations = 0
    conjecture_violations = 0
    with _Output(args.out) as out:
        for start, cols, masks, counterexamples in results:
            n = cols["product"].shape[0]
            for i in range(n):
                record = {"dim": args.dim, "index": start + i}
                for name in ("purity", "product", *_HARD_NAMES, "bound2"):
                    record[name] = float(cols[name][i])
                for name in (*_HARD_NAMES, "bound2"):
                    record[f"pass_{name}"] = not bool(masks[name][i])
                out.write(json.dumps(record, sort_keys=True))
                out.write("\n")
            hard_violations += int(sum(masks[name].sum() for name in _HARD_NAMES))
            conjecture_violations += len(counterexamples)
            for payload in counterexamples:
                path = _write_counterexample(args.counterexample_dir, "compare", payload)
                logger.warning("conjectured inequality violated; wrote %s", path)
    if conjecture_violations:
        return EXIT_CONJECTURE
    if hard_violations:
        return EXIT_FAILURE
    return EXIT_OK


# ---------------------------------------------------------------------------
# figure tables


def _csv_lines(header: str, rows: np.ndarray) -> list[str]:
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return lines


def _cmd_fig1(args) -> int:
    if args.points < 2:
        return _usage_error(f"--points must be >= 2, got {args.points}")
    with _Output(args.out) as out:
        _write_lines(out, _csv_lines(FIG1_HEADER, fig1_rows(args.points)))
    return EXIT_OK


def _cmd_fig2(args) -> int:
    if args.points < 2:
        return _usage_error(f"--points must be >= 2, got {args.points}")
    with _Output(args.out) as out:
        _write_lines(out, _csv_lines(FIG2_HEADER, fig2_rows(args.points)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Monte Carlo averages


def _mc_purity_task(payload):
    seed, purity, batch_index, count = payload
    rng = task_rng(seed, _D_MC_PURITY, batch_index)
    return Moments.of(qubit_bound_samples(purity, count, rng))


def _mc_mub_task(payload):
    seed, dim, lams, batch_index, count = payload
    rng = task_rng(seed, _D_MC_MUB, batch_index)
    phases = fourier_phases(dim)
    lam = np.asarray(lams)
    a = sample_unit_vectors(dim, count, rng)
    b = sample_unit_vectors(dim, count, rng)
    return Moments.of(mub_sample_columns(phases, lam, a, b))


def _mc_batches(samples: int) -> list[tuple[int, int]]:
    out = []
    start = 0
    index = 0
    while start < samples:
        count = min(_MC_BATCH, samples - start)
        out.append((index, count))
        start += count
        index += 1
    return out


def _report_lines(rows: list[dict], fmt: str) -> list[str]:
    if fmt == "json":
        return [json.dumps(row, sort_keys=True) for row in rows]
    keys = ("name", "mean", "std_error", "samples", "target", "z")
    lines = [",".join(keys)]
    for row in rows:
        cells = []
        for key in keys:
            value = row.get(key, "")
            if isinstance(value, float):
                cells.append(_fmt(value))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    return lines


def _estimate_rows(names, targets, moments) -> list[dict]:
    rows = []
    for name, target, est in zip(names, targets, moments.estimates()):
        rows.append(
            {
                "name": name,
                "mean": est.mean,
                "std_error": est.std_error,
                "samples": est.samples,
                "target": float(target),
                "z": est.z_score(float(target)),
            }
        )
    return rows


def _parse_spectrum(text: str | None, dim: int) -> np.ndarray:
    if text is None:
        return np.full(dim, 1.0 / dim)
    values = np.array([float(tok) for tok in text.split(",")])
    if values.shape != (dim,):
        raise ValueError(f"spectrum needs exactly {dim} comma-separated values")
    return values


def _cmd_mc_average(args) -> int:
    if args.samples < 1000:
        return _usage_error(f"--samples must be >= 1000, got {args.samples}")
    if args.mub == (args.purity is not None):
        return _usage_error("give exactly one of --purity or --mub")
    if args.mub:
        if args.dim < 2:
            return _usage_error(f"--dim must be >= 2, got {args.dim}")
        if args.samples < 10_000:
            return _usage_error("--mub averaging needs --samples >= 10000")
        try:
            lams = _parse_spectrum(args.spectrum, args.dim)
            DensityMatrix.from_spectrum(lams)  # validates
        except ValueError as err:
            return _usage_error(str(err))
        tasks = [
            (args.seed, args.dim, tuple(float(x) for x in lams), index, count)
            for index, count in _mc_batches(args.samples)
        ]
        moments = merge_moments(map_ordered(_mc_mub_task, tasks, args.workers))
        purity = float(lams @ lams)
        d = args.dim
        names = ("comm_norm", "lp_term", "lp_factor_a", "lp_factor_b")
        targets = (
            mub_commutator_norm_average(d),
            mub_lp_average(lams),
            (1.0 - purity) / d,
            (np.sqrt(lams).sum() ** 2 - 1.0) / d**2,
        )
    else:
        if not 0.5 <= args.purity <= 1.0:
            return _usage_error(f"--purity must lie in [0.5, 1], got {args.purity}")
        tasks = [
            (args.seed, args.purity, index, count) for index, count in _mc_batches(args.samples)
        ]
        moments = merge_moments(map_ordered(_mc_purity_task, tasks, args.workers))
        names = BOUND_NAMES
        targets = averaged_bounds_qubit(args.purity).as_array()
    rows = _estimate_rows(names, targets, moments)
    with _Output(args.out) as out:
        _write_lines(out, _report_lines(rows, args.format))
    return EXIT_OK


# ---------------------------------------------------------------------------
# mutually unbiased averages (closed forms, optional MC)


def _cmd_mub_average(args) -> int:
    if args.dim < 2:
        return _usage_error(f"--dim must be >= 2, got {args.dim}")
    try:
        lams = _parse_spectrum(args.spectrum, args.dim)
        DensityMatrix.from_spectrum(lams)
    except ValueError as err:
        return _usage_error(str(err))
    pair = fourier_mub_pair(args.dim, *_default_unit_spectra(args.dim))
    vanishing = mub_vanishing_check(pair, lams)
    rows = [
        {"name": "luo_park_mub_avg", "value": mub_lp_average(lams)},
        {"name": "bound2_mub_avg", "value": mub_b2_average(lams)},
        {"name": "comm_norm_avg", "value": mub_commutator_norm_average(args.dim)},
        {"name": "robertson_mub", "value": float(vanishing[0])},
        {"name": "schrodinger_mub", "value": float(vanishing[1])},
    ]
    if args.samples is not None:
        if args.samples < 10_000:
            return _usage_error("--samples must be >= 10000 for --mub averaging")
        tasks = [
            (args.seed, args.dim, tuple(float(x) for x in lams), index, count)
            for index, count in _mc_batches(args.samples)
        ]
        moments = merge_moments(map_ordered(_mc_mub_task, tasks, args.workers))
        comm_est = moments.estimates()[0]
        target = mub_commutator_norm_average(args.dim)
        rows.append(
            {
                "name": "comm_norm_mc",
                "mean": comm_est.mean,
                "std_error": comm_est.std_error,
                "samples": comm_est.samples,
                "target": target,
                "z": comm_est.z_score(target),
            }
        )
    if args.format == "json":
        lines = [json.dumps(row, sort_keys=True) for row in rows]
    else:
        keys = ("name", "value", "mean", "std_error", "samples", "target", "z")
        lines = [",".join(keys)]
        for row in rows:
            cells = []
            for key in keys:
                value = row.get(key, "")
                cells.append(_fmt(value) if isinstance(value, float) else str(value))
            lines.append(",".join(cells))
    with _Output(args.out) as out:
        _write_lines(out, lines)
    return EXIT_OK


def _default_unit_spectra(dim: int) -> tuple[np.ndarray, np.ndarray]:
    base = np.arange(1, dim + 1, dtype=float)
    base -= base.mean()
    if float(np.linalg.norm(base)) < 1e-12:
        base = np.ones(dim)
    unit = base / np.linalg.norm(base)
    return unit, unit


# ---------------------------------------------------------------------------
# conjecture campaign


def _conjecture_task(payload):
    seed, dim, trial, restarts, max_iters, tol, mode, seed_witness = payload
    spec_rng = task_rng(seed, _D_CONJECTURE, dim, trial, 0)
    lam = np.sort(spec_rng.dirichlet(np.ones(dim)))
    rho = DensityMatrix.from_spectrum(lam)
    opt_rng = task_rng(seed, _D_CONJECTURE, dim, trial, 1)
    result = maximize_ratio(
        rho,
        restarts=restarts,
        max_iters=max_iters,
        tol=tol,
        mode=mode,
        rng=opt_rng,
        seed_witness=seed_witness,
    )
    record = result_record(result)
    record["trial"] = trial
    return record


def _write_counterexample(dirpath: str, kind: str, payload: dict) -> Path:
    directory = Path(dirpath)
    directory.mkdir(parents=True, exist_ok=True)
    tag = payload.get("trial", payload.get("index", 0))
    path = directory / f"{kind}_d{payload['dim']}_{tag}.json"
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def _cmd_verify_conjecture(args) -> int:
    if not 2 <= args.dim <= 15:
        return _usage_error(f"--dim must lie in [2, 15], got {args.dim}")
    if args.trials < 1:
        return _usage_error(f"--trials must be >= 1, got {args.trials}")
    if args.mode not in ("hermitian", "complex"):
        return _usage_error(f"--mode must be hermitian or complex, got {args.mode}")
    if args.no_witness_seed and args.restarts < 1:
        return _usage_error("--no-witness-seed needs --restarts >= 1")
    tasks = [
        (
            args.seed,
            args.dim,
            trial,
            args.restarts,
            args.max_iters,
            args.tol,
            args.mode,
            not args.no_witness_seed,
        )
        for trial in range(args.trials)
    ]
    records = map_ordered(_conjecture_task, tasks, args.workers)

    counterexamples = 0
    non_converged = []
    max_deviation = 0.0
    with _Output(args.out) as out:
        for record in records:
            out.write(json.dumps(record, sort_keys=True))
            out.write("\n")
            max_deviation = max(max_deviation, record["relative_deviation"])
            if not record["converged"]:
                non_converged.append(record["trial"])
            if record["exceeds_conjecture"]:
                counterexamples += 1
                path = _write_counterexample(args.counterexample_dir, "conjecture", record)
                logger.warning("conjectured constant exceeded; wrote %s", path)
        summary = {
            "summary": True,
            "dim": args.dim,
            "mode": args.mode,
            "trials": args.trials,
            "max_relative_deviation": max_deviation,
            "all_converged": not non_converged,
            "non_converged_trials": non_converged,
            "counterexamples": counterexamples,
        }
        out.write(json.dumps(summary, sort_keys=True))
        out.write("\n")
    if counterexamples:
        return EXIT_COUNTEREXAMPLE
    if non_converged:
        return EXIT_FAILURE
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="base RNG seed (default 42)")
    common.add_argument(
        "--workers",
        type=int,
        default=os.cpu_count() or 1,
        help="worker processes (default: available parallelism)",
    )
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument(
        "--format", choices=("csv", "json"), default="json", help="report format where applicable"
    )
    common.add_argument(
        "--counterexample-dir",
        default="counterexamples",
        help="directory for counterexample artifacts",
    )

    parser = argparse.ArgumentParser(
        prog="cbounds",
        description="Variance-product uncertainty bounds from state-weighted commutator norms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="bound comparison over random triples")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("fig1", parents=[common], help="averaged qubit bounds vs purity (CSV)")
    p.add_argument("--points", type=int, required=True)
    p.set_defaults(func=_cmd_fig1)

    p = sub.add_parser("fig2", parents=[common], help="unbiased-pair averages vs purity (CSV)")
    p.add_argument("--points", type=int, required=True)
    p.set_defaults(func=_cmd_fig2)

    p = sub.add_parser("mc-average", parents=[common], help="Monte Carlo averaged bounds")
    p.add_argument("--purity", type=float, default=None)
    p.add_argument("--mub", action="store_true", help="average a mutually unbiased pair instead")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--spectrum", default=None, help="comma-separated state spectrum")
    p.add_argument("--samples", type=int, required=True)
    p.set_defaults(func=_cmd_mc_average)

    p = sub.add_parser(
        "verify-conjecture", parents=[common], help="maximize the commutator ratio per state"
    )
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--mode", default="hermitian")
    p.add_argument(
        "--no-witness-seed",
        action="store_true",
        help="rely on random starts only (independent check of attainability)",
    )
    p.set_defaults(func=_cmd_verify_conjecture)

    p = sub.add_parser(
        "mub-average", parents=[common], help="mutually unbiased closed-form averages"
    )
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--spectrum", default=None, help="comma-separated state spectrum")
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=_cmd_mub_average)

    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("CB_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
