"""Command-line front end.

Subcommands: simulate | gap | fill | estimate | metrics | experiment.
Exit codes: 0 success, 2 usage error, 3 data error.

Model parameters are passed as repeatable ``--param key=value`` flags; the
same keys appear in experiment config files (JSON). Valid keys per model:
discrete-brownian: sigma, target_x, target_y; fixed-velocity: v;
angular-walk: sigma, v; internal-state: uniformity (alias s), step;
run-tumble: l (alias rate), v.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import BridgefillError
from .estimator import estimate_sigma
from .experiments import (
    KINDS,
    config_from_dict,
    default_config,
    run_experiment,
    write_records_csv,
    write_summary_json,
)
from .gapfill import (
    DEFAULT_ROG_REALISATIONS,
    estimate_gap_length,
    estimate_gap_rog,
    fill_bridge,
    fill_linear,
)
from .generators import MODEL_NAMES, generate, spec_from_dict
from .metrics import path_length, radius_of_gyration
from .seeding import child_seed
from .trajectory import (
    GappedTrajectory,
    Trajectory,
    excise_gap,
    read_trajectory_csv,
    splice_fill,
    write_trajectory_csv,
)

USAGE_ERROR = 2
DATA_ERROR = 3


def _parse_params(pairs: list[str], parser: argparse.ArgumentParser) -> dict:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            parser.error(f"--param expects key=value, got {pair!r}")
        try:
            params[key] = float(value)
        except ValueError:
            parser.error(f"--param {key}: {value!r} is not a number")
    return params


def _model_spec(args, parser: argparse.ArgumentParser):
    return spec_from_dict({"model": args.model, **_parse_params(args.param, parser)})


def _detect_gap(traj: Trajectory) -> GappedTrajectory:
    """Auto-detect one run of missing integer timestamps between min and max."""
    times = traj.times
    if not np.array_equal(times, np.round(times)):
        raise BridgefillError(
            "gap auto-detection needs integer timestamps; "
            "pass --gap-start/--gap-count instead"
        )
    full = np.arange(int(times[0]), int(times[-1]) + 1)
    present = np.isin(full, times.astype(int))
    missing = full[~present]
    if len(missing) == 0:
        raise BridgefillError("no missing timestamps between min and max")
    if missing[-1] - missing[0] != len(missing) - 1:
        raise BridgefillError(
            "found several gaps; this tool handles one contiguous gap"
        )
    split = int(np.searchsorted(times, missing[0]))
    return GappedTrajectory(
        before=traj.segment(0, split),
        after=traj.segment(split, len(traj)),
        missing_times=missing.astype(float),
    )


def _gapped_from_args(traj: Trajectory, args) -> GappedTrajectory:
    if args.gap_start is None and args.gap_count is None:
        return _detect_gap(traj)
    if args.gap_start is None or args.gap_count is None:
        raise BridgefillError("--gap-start and --gap-count must be given together")
    return excise_gap(traj, args.gap_start, args.gap_count)


def _cmd_simulate(args, parser) -> int:
    spec = _model_spec(args, parser)
    traj = generate(spec, args.steps, args.seed)
    write_trajectory_csv(args.out, traj)
    return 0


def _cmd_gap(args, parser) -> int:
    traj = read_trajectory_csv(args.infile)
    gapped = excise_gap(traj, args.gap_start, args.gap_count)
    write_trajectory_csv(args.out, gapped.observed())
    return 0


def _cmd_estimate(args, parser) -> int:
    traj = read_trajectory_csv(args.infile)
    est = estimate_sigma(traj)
    json.dump(
        {
            "sigma_hat": est.sigma_m,
            "log_likelihood": est.log_likelihood_at_max,
            "n_triples": est.n_triples,
            "clamped": est.clamped,
        },
        sys.stdout,
        indent=2,
        sort_keys=True,
    )
    print()
    return 0


def _cmd_metrics(args, parser) -> int:
    traj = read_trajectory_csv(args.infile)
    json.dump(
        {
            "path_length": path_length(traj),
            "rog": radius_of_gyration(traj),
            "point_count": len(traj),
        },
        sys.stdout,
        indent=2,
        sort_keys=True,
    )
    print()
    return 0


def _cmd_fill(args, parser) -> int:
    traj = read_trajectory_csv(args.infile)
    gapped = _gapped_from_args(traj, args)
    chord = float(math.hypot(*gapped.chord))
    summary: dict = {
        "method": args.method,
        "n_missing": gapped.n_missing,
        "chord_length": chord,
    }
    if args.sigma is not None:
        sigma = args.sigma
        summary["sigma_hat"] = sigma
        summary["sigma_source"] = "override"
    else:
        est = estimate_sigma(gapped.observed())
        sigma = est.sigma_m
        summary["sigma_hat"] = sigma
        summary["sigma_source"] = "estimated"
        summary["sigma_clamped"] = est.clamped
    if args.method == "bridge":
        fill = fill_bridge(gapped, sigma, args.seed)
        summary["expected_gap_length"] = estimate_gap_length(gapped, sigma)
        rog = estimate_gap_rog(
            gapped, sigma, realisations=args.realisations,
            rng=child_seed(args.seed, 1),
        )
        summary["rog_estimate"] = {
            "mean": rog.mean,
            "std_error": None if math.isnan(rog.std_error) else rog.std_error,
            "realisations": rog.realisations,
        }
    else:
        fill = fill_linear(gapped)
        summary["expected_gap_length"] = chord
    filled = splice_fill(gapped, fill, args.method)
    summary["rog_filled"] = radius_of_gyration(filled)
    write_trajectory_csv(args.out, filled)
    json.dump(summary, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


def _cmd_experiment(args, parser) -> int:
    if args.config is not None:
        data = json.loads(Path(args.config).read_text())
        if args.replicates is not None:
            data["replicates"] = args.replicates
        if args.seed is not None:
            data["master_seed"] = args.seed
        if args.kind is not None:
            data["kind"] = args.kind
        config = config_from_dict(data)
    else:
        if args.kind is None:
            parser.error("experiment needs --kind or --config")
        config = default_config(
            args.kind,
            replicates=args.replicates if args.replicates is not None else 1000,
            **({"master_seed": args.seed} if args.seed is not None else {}),
        )
    report = run_experiment(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = config.kind.replace("-", "_")
    records_path = out_dir / f"{stem}_records.csv"
    summary_path = out_dir / f"{stem}_summary.json"
    write_records_csv(report, records_path)
    write_summary_json(report, summary_path)
    json.dump(
        {
            "records": str(records_path),
            "summary": str(summary_path),
            "record_count": len(report.records),
        },
        sys.stdout,
        indent=2,
        sort_keys=True,
    )
    print()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgefill",
        description="Fill gaps in 2-D trajectories with Brownian bridges.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a movement model to CSV")
    p.add_argument("--model", required=True, choices=MODEL_NAMES)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gap", help="remove points and write the observed rest")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--gap-start", type=int, required=True,
                   help="index of the first removed point")
    p.add_argument("--gap-count", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("estimate", help="estimate the diffusion coefficient")
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("fill", help="fill a gap by bridge or straight line")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--gap-start", type=int, default=None,
                   help="index of the first point to remove before filling "
                        "(omit both gap flags to auto-detect missing "
                        "integer timestamps)")
    p.add_argument("--gap-count", type=int, default=None)
    p.add_argument("--method", choices=("bridge", "linear"), default="bridge")
    p.add_argument("--sigma", type=float, default=None,
                   help="skip estimation and use this diffusion coefficient")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--realisations", type=int, default=DEFAULT_ROG_REALISATIONS,
                   help="Monte-Carlo realisations for the RoG estimate")
    p.add_argument("--out", required=True)

    p = sub.add_parser("metrics", help="path length and RoG of a CSV")
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("experiment", help="run a batch experiment")
    p.add_argument("--kind", choices=KINDS, default=None)
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--out", required=True, help="output directory")

    return parser


_HANDLERS = {
    "simulate": _cmd_simulate,
    "gap": _cmd_gap,
    "estimate": _cmd_estimate,
    "fill": _cmd_fill,
    "metrics": _cmd_metrics,
    "experiment": _cmd_experiment,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, parser)
    except (BridgefillError, OSError, json.JSONDecodeError) as exc:
        print(f"bridgefill: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
