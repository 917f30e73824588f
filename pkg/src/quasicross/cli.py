"""Command-line interface.

Every command prints a machine-readable JSON report on stdout.  Exit
codes: 0 success, 1 the input drawing is not simple, 2 usage or input
document errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import analysis_json, analyze, bounds_json, subsample_json, validation_json
from .bounds import BoundInput, best_lower_bound, monte_carlo_subsample
from .drawing import convex_complete, validate
from .fileformat import (
    DrawingFormatError,
    parse_rational,
    read_checkpoint_state,
    read_drawing_file,
    read_search_config,
    serialize_drawing,
    write_drawing_file,
)
from .search import anneal
from .svg import export_svg

EXIT_OK = 0
EXIT_INVALID_DRAWING = 1
EXIT_USAGE = 2


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_verify(args) -> int:
    d = read_drawing_file(args.file)
    report = validate(d)
    _emit({"n": d.n, "e": d.e, **validation_json(d, report)})
    return EXIT_OK if report.is_valid else EXIT_INVALID_DRAWING


def cmd_count(args) -> int:
    d = read_drawing_file(args.file)
    result = analyze(d)
    _emit(analysis_json(result))
    return EXIT_OK if result.is_valid else EXIT_INVALID_DRAWING


def _bound_input(args) -> BoundInput:
    if args.complete is not None:
        return BoundInput.complete(args.complete)
    if args.n is None or args.e is None:
        raise DrawingFormatError("bad-usage", "need either --complete N or both --n and --e")
    return BoundInput(args.n, args.e)


def cmd_bounds(args) -> int:
    _emit(bounds_json(best_lower_bound(_bound_input(args))))
    return EXIT_OK


def cmd_table(args) -> int:
    lo, hi = args.range
    if lo > hi or lo < 4:
        raise DrawingFormatError("bad-usage", "range must satisfy 4 <= A <= B")
    rows = [bounds_json(best_lower_bound(BoundInput.complete(n)))
            for n in range(lo, hi + 1)]
    _emit({"complete_graphs": rows})
    return EXIT_OK


def cmd_subsample(args) -> int:
    d = read_drawing_file(args.file)
    stats = monte_carlo_subsample(d, parse_rational(args.p, "--p"),
                                  args.trials, args.seed)
    _emit(subsample_json(stats))
    return EXIT_OK


def cmd_search(args) -> int:
    d = read_drawing_file(args.file)
    cfg = read_search_config(args.config)
    resume = read_checkpoint_state(args.resume) if args.resume else None
    best, trace = anneal(
        d, cfg,
        checkpoint_path=args.checkpoint,
        checkpoint_every=args.checkpoint_every,
        resume=resume)
    if args.out:
        write_drawing_file(args.out, best)
    _emit({
        "iterations": trace.iterations,
        "restarts": len(trace.restarts),
        "best": {
            "triples": trace.best_objective.triples,
            "crossing_pairs": trace.best_objective.crossing_pairs,
            "restart": trace.best_restart,
        },
        "improvements": [
            {"restart": e.restart, "iteration": e.iteration,
             "triples": e.objective.triples,
             "crossing_pairs": e.objective.crossing_pairs}
            for e in trace.best_timeline],
        **({"out": args.out} if args.out else {"drawing": json.loads(serialize_drawing(best))}),
    })
    return EXIT_OK


def cmd_svg(args) -> int:
    d = read_drawing_file(args.file)
    result = analyze(d)
    if not result.is_valid:
        _emit(analysis_json(result))
        return EXIT_INVALID_DRAWING
    export_svg(d, args.out, result)
    _emit({"out": args.out, "triple_count": result.triples.triple_count})
    return EXIT_OK


def cmd_gen_convex(args) -> int:
    d = convex_complete(args.n)
    write_drawing_file(args.out, d)
    _emit({"out": args.out, "n": d.n, "e": d.e})
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve

    serve(args.port, args.host, args.static_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasicross",
        description="Analyze and construct simple drawings with few "
                    "pairwise-crossing edge triples.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a drawing file for simplicity")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="full analysis: crossings, triples, bounds")
    p.add_argument("file")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bounds", help="lower bounds for (n, e) or a complete graph")
    p.add_argument("--n", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--complete", type=int, metavar="N")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table", help="bound table for complete graphs K_A..K_B")
    p.add_argument("--complete-range", dest="range", type=int, nargs=2,
                   metavar=("A", "B"), required=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("subsample", help="Monte Carlo vertex subsampling statistics")
    p.add_argument("file")
    p.add_argument("--p", required=True, help="keep probability, rational string")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_subsample)

    p = sub.add_parser("search", help="anneal toward fewer triples")
    p.add_argument("file")
    p.add_argument("--config", required=True, help="search config JSON")
    p.add_argument("--resume", help="checkpoint state file to resume from")
    p.add_argument("--out", help="write the best drawing here")
    p.add_argument("--checkpoint", help="checkpoint path prefix")
    p.add_argument("--checkpoint-every", type=int, default=0, metavar="K")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("svg", help="export a drawing to SVG")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_svg)

    p = sub.add_parser("gen-convex", help="generate the convex-position complete graph K_n")
    p.add_argument("n", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_convex)

    p = sub.add_parser("serve", help="run the local analysis service")
    p.add_argument("--port", type=int, default=8754)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static-dir", help="also serve editor files from this directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DrawingFormatError as err:
        print(json.dumps({"error": {"kind": err.kind, "message": str(err)}}),
              file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as err:
        print(json.dumps({"error": {"kind": "file-not-found", "message": str(err)}}),
              file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(json.dumps({"error": {"kind": "bad-value", "message": str(err)}}),
              file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
