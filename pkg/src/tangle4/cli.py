"""Command-line interface: single-state measures, family sweeps, and the
property verification suites.

Every result payload embeds a run manifest (command, inputs, seed, resolved
configuration, version, wall clock) so a run can be reproduced exactly;
identical command and seed give identical results up to the wall-clock
field. Exit codes: 0 success/PASS, 1 verification or prediction failure,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .convexroof import RoofConfig, roof_pair
from .families import FAMILY_IDS, paper_points, rows_to_csv, sweep
from .measures import (
    concurrence_assist_2q,
    concurrence_mixed_2q,
    mu3_pure,
    n_tangle_4q,
    tau3_pure,
)
from .qstate import load_state, partial_trace
from .suites import SUITE_NAMES, run_suite
from .tau4 import entanglement_vector, tau4_of_dm, tau4_pure4

MEASURES = (
    "mu3", "tau3", "concurrence", "concurrence-assist", "n-tangle",
    "tau3-mixed", "tau-a", "tau4", "entanglement-vector",
)


class UsageError(Exception):
    pass


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=7, help="base random seed")
    parser.add_argument("--restarts", type=int, default=None,
                        help="roof optimizer restarts")
    parser.add_argument("--ensemble-length", type=int, default=None,
                        help="decomposition length searched (default: auto)")
    parser.add_argument("--max-iterations", type=int, default=None,
                        help="simplex iterations per restart")
    parser.add_argument("--roof-tol", type=float, default=None,
                        help="roof convergence tolerance")
    parser.add_argument("--out", default=None, help="write the JSON payload here")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def _roof_config(args) -> RoofConfig:
    cfg = RoofConfig(seed=args.seed)
    updates = {}
    if args.restarts is not None:
        updates["restarts"] = args.restarts
    if args.ensemble_length is not None:
        updates["ensemble_length"] = args.ensemble_length
    if args.max_iterations is not None:
        updates["max_iterations"] = args.max_iterations
    if args.roof_tol is not None:
        updates["tolerance"] = args.roof_tol
    if updates:
        from dataclasses import replace
        cfg = replace(cfg, **updates)
    return cfg


def _manifest(args, inputs: list[str], config: RoofConfig, started: float) -> dict:
    return {
        "command": " ".join(sys.argv[1:]) if sys.argv[1:] else args.cmd,
        "inputs": inputs,
        "seed": args.seed,
        "config": {
            "ensemble_length": config.ensemble_length,
            "restarts": config.restarts,
            "max_iterations": config.max_iterations,
            "tolerance": config.tolerance,
        },
        "version": __version__,
        "wall_clock_s": round(time.perf_counter() - started, 6),
    }


def _emit(payload: dict, args, text: str | None = None) -> None:
    body = text if text is not None else json.dumps(payload, indent=2)
    print(body)
    if args.out:
        with open(args.out, "w") as fh:
            if text is not None:
                fh.write(text)
            else:
                json.dump(payload, fh, indent=2)
                fh.write("\n")


def _run_measure(args) -> int:
    started = time.perf_counter()
    state = load_state(args.state)
    cfg = _roof_config(args)
    name = args.measure
    dims = tuple(state.dims)

    if name in ("mu3", "tau3"):
        if dims != (2, 2, 2):
            raise UsageError(f"{name} needs a three-qubit state, file has dims {dims}")
        fn = mu3_pure if name == "mu3" else tau3_pure
        result = fn(state).to_dict()
    elif name in ("concurrence", "concurrence-assist"):
        if dims != (2, 2):
            raise UsageError(f"{name} needs a two-qubit state, file has dims {dims}")
        fn = concurrence_mixed_2q if name == "concurrence" else concurrence_assist_2q
        result = fn(state.projector()).to_dict()
    elif name == "n-tangle":
        if dims != (2, 2, 2, 2):
            raise UsageError(f"n-tangle needs four qubits, file has dims {dims}")
        result = n_tangle_4q(state).to_dict()
    elif name in ("tau3-mixed", "tau-a"):
        if args.traced is not None:
            if len(dims) != 4:
                raise UsageError("--traced requires a four-party state file")
            keep = [i for i in range(4) if i != args.traced]
            dm = partial_trace(state, keep)
        elif dims == (2, 2, 2):
            dm = state.projector()
        else:
            raise UsageError(f"{name} needs a three-qubit state or --traced, dims {dims}")
        lo, hi = roof_pair(dm, cfg)
        result = (lo if name == "tau3-mixed" else hi).to_dict()
    elif name == "tau4":
        if len(dims) == 4:
            if args.traced is None:
                raise UsageError("tau4 on a four-party state needs --traced")
            result = tau4_pure4(state, args.traced, cfg).to_dict()
        elif dims == (2, 2, 2):
            result = tau4_of_dm(state.projector(), cfg).to_dict()
        else:
            raise UsageError(f"tau4 needs a three- or four-party state, dims {dims}")
    elif name == "entanglement-vector":
        if dims != (2, 2, 2, 2):
            raise UsageError(f"entanglement-vector needs four qubits, dims {dims}")
        result = entanglement_vector(state, cfg).to_dict()
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown measure {name}")

    payload = {
        "manifest": _manifest(args, [args.state], cfg, started),
        "measure": name,
        "result": result,
    }
    _emit(payload, args)
    return 0


def _parse_grid(text: str) -> list[float]:
    try:
        start, stop, count = text.split(":")
        return list(np.linspace(float(start), float(stop), int(count)))
    except ValueError as exc:
        raise UsageError(f"bad grid spec {text!r}, expected start:stop:count") from exc


def _family_points(args) -> list[tuple[str, tuple[complex, ...]]]:
    if args.paper_points:
        fams = list(FAMILY_IDS) if (args.all or not args.family) else [args.family]
        points = []
        for fid in fams:
            points.extend((s.family_id, s.params()) for s in paper_points(fid))
        return points
    if not args.family:
        raise UsageError("name a family or pass --paper-points")
    grids = []
    for flag, grid_flag in (("a", "grid_a"), ("b", "grid_b"),
                            ("c", "grid_c"), ("d", "grid_d")):
        grid = getattr(args, grid_flag)
        if grid is not None:
            grids.append([complex(x) for x in _parse_grid(grid)])
        else:
            value = getattr(args, flag)
            grids.append([complex(value) if value is not None else 0j])
    points = []
    from itertools import product
    for combo in product(*grids):
        points.append((args.family, combo))
    return points


def _run_families(args) -> int:
    started = time.perf_counter()
    cfg = _roof_config(args)
    rows = []
    for fid, params in _family_points(args):
        rows.extend(sweep(fid, [params], cfg, zero_tol=args.zero_tol,
                          margin=args.margin))
    if all(r.tau4 is None for r in rows):
        raise UsageError("every requested point has zero norm")
    disagreements = [r for r in rows if r.agree is False]
    payload = {
        "manifest": _manifest(args, [], cfg, started),
        "rows": [r.to_dict() for r in rows],
        "disagreements": len(disagreements),
    }
    if args.format == "csv":
        _emit(payload, args, text=rows_to_csv(rows))
    else:
        _emit(payload, args)
    return 1 if disagreements else 0


def _run_verify(args) -> int:
    started = time.perf_counter()
    cfg = _roof_config(args)
    custom = None
    if any(x is not None for x in (args.restarts, args.max_iterations,
                                   args.ensemble_length, args.roof_tol)):
        custom = cfg
    report = run_suite(args.suite, args.trials, args.seed,
                       config=custom, tolerance=args.tol)
    payload = {
        "manifest": _manifest(args, [], cfg, started),
        "report": report.to_dict(),
    }
    _emit(payload, args)
    verdict = "PASS" if report.passed else "FAIL"
    print(f"{args.suite}: {verdict} (worst {report.worst:.3g}, "
          f"tolerance {report.tolerance:.3g}, trials {report.trials})",
          file=sys.stderr)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tangle4",
        description="Localized quadripartite entanglement toolkit",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_measure = sub.add_parser("measure", help="evaluate one measure on a state file")
    p_measure.add_argument("measure", choices=MEASURES)
    p_measure.add_argument("--state", required=True, help="state JSON file")
    p_measure.add_argument("--traced", type=int, default=None,
                           help="subsystem to trace out (four-party inputs)")
    _add_config_flags(p_measure)

    p_fam = sub.add_parser("families", help="tau4 of standard family states")
    p_fam.add_argument("family", nargs="?", choices=FAMILY_IDS)
    p_fam.add_argument("--all", action="store_true",
                       help="with --paper-points: run every family")
    p_fam.add_argument("--paper-points", action="store_true",
                       help="run the published zero/nonzero conditions")
    for flag in "abcd":
        p_fam.add_argument(f"--{flag}", type=complex, default=None,
                           help=f"parameter {flag} (complex literal)")
        p_fam.add_argument(f"--grid-{flag}", default=None,
                           help=f"grid for {flag} as start:stop:count")
    p_fam.add_argument("--zero-tol", type=float, default=2e-3)
    p_fam.add_argument("--margin", type=float, default=5e-2,
                       help="witness gap demanded for a nonzero call")
    _add_config_flags(p_fam)

    p_verify = sub.add_parser("verify", help="run a property suite")
    p_verify.add_argument("suite", choices=SUITE_NAMES)
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--tol", type=float, default=None,
                          help="suite tolerance override")
    _add_config_flags(p_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "measure":
            return _run_measure(args)
        if args.cmd == "families":
            return _run_families(args)
        return _run_verify(args)
    except (UsageError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
