"""Command-line front end.

Every subcommand is a thin wrapper over the library modules: it parses
flags, loads shapes, fans per-direction work over worker threads, and
serializes results.  No numerical logic lives here.

Exit codes: 0 ok, 2 parse/validation failure, 3 class violation,
4 reconstruction failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as eio
from ._geometry import uniform_directions
from .curves import ect_curve
from .errors import (
    EulerScanError,
    ParseError,
    ReconstructionFailed,
    TieError,
    ValidationError,
)
from .persistence import lower_star_filtration, persistence_diagrams
from .reconstruction import (
    ComplexOracle,
    ShapeClassParams,
    class_check,
    reconstruct,
)
from .stats import invariance_test
from .strata import arrangement, delta_C_net, delta_net, strata_representatives
from .validation import as_direction

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CLASS = 3
EXIT_RECONSTRUCTION = 4


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_direction(spec: str) -> np.ndarray:
    try:
        return as_direction([float(x) for x in spec.split(",")])
    except ValueError as exc:
        raise ParseError(f"bad direction {spec!r}: {exc}") from None


def _resolve_directions(args, dim: int) -> np.ndarray:
    if args.direction:
        return np.array([_parse_direction(s) for s in args.direction])
    if args.random is not None:
        rng = np.random.default_rng(args.seed)
        return uniform_directions(args.random, dim, rng)
    if args.net_delta is not None:
        if args.net_c is not None and args.net_c > 1:
            return delta_C_net(dim, args.net_delta, args.net_c, seed=args.seed).directions
        return delta_net(dim, args.net_delta).directions
    raise ParseError("no directions given: use --direction, --random or --net-delta")


def _map_directions(fn, directions, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, directions))
    return [fn(v) for v in directions]


def _add_direction_flags(sub) -> None:
    sub.add_argument(
        "--direction",
        action="append",
        help="comma-separated components, repeatable (e.g. --direction 1,0)",
    )
    sub.add_argument("--random", type=int, help="number of uniform random directions")
    sub.add_argument("--net-delta", type=float, help="radius of a covering net")
    sub.add_argument("--net-c", type=int, help="net multiplicity (with --net-delta)")


def _add_common_flags(sub) -> None:
    sub.add_argument("--out", help="output path (default stdout)")
    sub.add_argument("--seed", type=int, default=0, help="seed for randomized modes")
    sub.add_argument("--threads", type=int, default=1, help="worker threads")
    sub.add_argument("--tie-tol", type=float, default=None)
    sub.add_argument("--wall-tol", type=float, default=None)
    sub.add_argument("--close-faces", action="store_true", help="close JSON shapes under faces")


def cmd_ect(args) -> int:
    complex = eio.load_shape(args.shape, close=args.close_faces)
    directions = _resolve_directions(args, complex.dimension_ambient)
    curves = _map_directions(
        lambda v: ect_curve(complex, v, args.tie_tol), directions, args.threads
    )
    if args.format == "csv":
        if len(curves) == 1:
            _write(args.out, eio.curve_to_csv(curves[0]))
        else:
            blocks = []
            for v, c in zip(directions, curves):
                blocks.append("# direction " + ",".join(repr(float(x)) for x in v))
                blocks.append(eio.curve_to_csv(c).rstrip("\n"))
            _write(args.out, "\n".join(blocks) + "\n")
    else:
        payload = [
            {"direction": list(map(float, v)), "curve": eio.curve_to_json(c)}
            for v, c in zip(directions, curves)
        ]
        _write(args.out, eio.dump_json(payload))
    return EXIT_OK


def cmd_pht(args) -> int:
    complex = eio.load_shape(args.shape, close=args.close_faces)
    directions = _resolve_directions(args, complex.dimension_ambient)

    def diagrams_at(v):
        return persistence_diagrams(lower_star_filtration(complex, v, args.tie_tol))

    results = _map_directions(diagrams_at, directions, args.threads)
    payload = [
        {"direction": list(map(float, v)), "diagrams": eio.diagrams_to_json(dgms)}
        for v, dgms in zip(directions, results)
    ]
    _write(args.out, eio.dump_json(payload))
    return EXIT_OK


def cmd_strata(args) -> int:
    if args.shape is None and args.net_delta is None:
        raise ParseError("strata needs --shape (representatives) or --net-delta (net export)")
    payload = {}
    if args.shape is not None:
        complex = eio.load_shape(args.shape, close=args.close_faces)
        arr = arrangement(complex.vertices)
        mode = args.mode or ("exact2d" if complex.dimension_ambient == 2 else "sampled")
        reps = strata_representatives(arr, mode=mode, seed=args.seed, wall_tol=args.wall_tol)
        payload["mode"] = mode
        payload["representatives"] = eio.representatives_to_json(reps)
    if args.net_delta is not None:
        dim = args.net_d or (complex.dimension_ambient if args.shape else None)
        if dim is None:
            raise ParseError("--net-d is required when exporting a net without --shape")
        if args.net_c is not None and args.net_c > 1:
            net = delta_C_net(dim, args.net_delta, args.net_c, seed=args.seed)
        else:
            net = delta_net(dim, args.net_delta)
        payload["net"] = eio.net_to_json(net)
    _write(args.out, eio.dump_json(payload))
    return EXIT_OK


def cmd_class_check(args) -> int:
    complex = eio.load_shape(args.shape, close=args.close_faces)
    params = ShapeClassParams(complex.dimension_ambient, args.delta, args.k_delta)
    report = class_check(complex, params, args.samples, seed=args.seed)
    _write(
        args.out,
        eio.dump_json(
            {"in_class": report.in_class, "violations": list(report.violations)}
        ),
    )
    return EXIT_OK if report.in_class else EXIT_CLASS


def cmd_reconstruct(args) -> int:
    complex = eio.load_shape(args.shape, close=args.close_faces)
    params = ShapeClassParams(complex.dimension_ambient, args.delta, args.k_delta)
    oracle = ComplexOracle(complex, tie_tol=args.tie_tol)
    report = reconstruct(oracle, params, seed=args.seed, holdout=args.holdout)
    _write(args.report, eio.dump_json(eio.report_to_json(report)))
    return EXIT_OK


def cmd_compare(args) -> int:
    K1 = eio.load_shape(args.a, close=args.close_faces)
    K2 = eio.load_shape(args.b, close=args.close_faces)
    report = invariance_test(K1, K2, n=args.n, seed=args.seed, trials=args.trials)
    payload = {
        "statistic": report.statistic,
        "null_quantiles": report.null_quantiles,
        "decision": report.decision,
        "consistent": report.consistent,
        "n": report.n,
        "trials": report.trials,
    }
    _write(args.out, eio.dump_json(payload))
    if args.csv is not None:
        from .stats import sample_pushforward

        rng = np.random.default_rng(args.seed)
        lines = ["set,index,n_jumps,first_threshold,last_threshold,terminal_value"]
        for name, shape in (("a", K1), ("b", K2)):
            sample = sample_pushforward(shape, args.n, int(rng.integers(2**31)))
            for i, c in enumerate(sample.curves):
                first = repr(c.thresholds[0]) if c.thresholds else ""
                last = repr(c.thresholds[-1]) if c.thresholds else ""
                lines.append(f"{name},{i},{c.n_jumps},{first},{last},{c.terminal_value}")
        _write(args.csv, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulerscan",
        description="Euler characteristic transforms of embedded simplicial complexes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ect = sub.add_parser("ect", help="Euler curves of a shape")
    p_ect.add_argument("--shape", required=True)
    p_ect.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_direction_flags(p_ect)
    _add_common_flags(p_ect)
    p_ect.set_defaults(func=cmd_ect)

    p_pht = sub.add_parser("pht", help="persistence diagrams of a shape")
    p_pht.add_argument("--shape", required=True)
    _add_direction_flags(p_pht)
    _add_common_flags(p_pht)
    p_pht.set_defaults(func=cmd_pht)

    p_strata = sub.add_parser("strata", help="stratum representatives / direction nets")
    p_strata.add_argument("--shape")
    p_strata.add_argument("--mode", choices=("exact2d", "sampled"))
    p_strata.add_argument("--net-delta", type=float)
    p_strata.add_argument("--net-c", type=int)
    p_strata.add_argument("--net-d", type=int)
    _add_common_flags(p_strata)
    p_strata.set_defaults(func=cmd_strata)

    p_cc = sub.add_parser("class-check", help="shape-class membership check")
    p_cc.add_argument("--shape", required=True)
    p_cc.add_argument("--delta", type=float, required=True)
    p_cc.add_argument("--k-delta", type=int, required=True)
    p_cc.add_argument("--samples", type=int, default=32)
    _add_common_flags(p_cc)
    p_cc.set_defaults(func=cmd_class_check)

    p_rec = sub.add_parser("reconstruct", help="reconstruct a shape from its oracle")
    p_rec.add_argument("--shape", required=True)
    p_rec.add_argument("--delta", type=float, required=True)
    p_rec.add_argument("--k-delta", type=int, required=True)
    p_rec.add_argument("--holdout", type=int, default=100)
    p_rec.add_argument("--report", help="report JSON path (default stdout)")
    _add_common_flags(p_rec)
    p_rec.set_defaults(func=cmd_reconstruct)

    p_cmp = sub.add_parser("compare", help="O(d)-invariant distribution comparison")
    p_cmp.add_argument("--a", required=True)
    p_cmp.add_argument("--b", required=True)
    p_cmp.add_argument("--n", type=int, default=64)
    p_cmp.add_argument("--trials", type=int, default=20)
    p_cmp.add_argument("--csv", help="CSV path for sampled curve summaries")
    _add_common_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def _error_json(exc: Exception) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, TieError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_PARSE
    except ReconstructionFailed as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_RECONSTRUCTION
    except EulerScanError as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
