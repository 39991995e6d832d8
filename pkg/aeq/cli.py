"""
Command-line entry point: aeq <command> [options].

Standard output carries one JSON document per run (the report, or an error
document); summaries for people go to standard error. Exit codes: 0 pass,
1 negative verdict, 2 usage or input error.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from tabulate import tabulate

from aeq.audit import audit
from aeq.bounds import bounds_for_dimension, load_bounds_table, verify_ramsey_33
from aeq.config import (
    CLIQUE_SEARCH_LIMIT,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    TOL_FILE_ENV,
    configure_logging,
    resolve_tolerance,
)
from aeq.constructions import CONSTRUCTION_KINDS, construct
from aeq.errors import AeqError, CliqueLimitError, InputError, NotAlmostEquidistantError
from aeq.fileio import dumps, read_graph, read_point_set, write_point_set
from aeq.geometry import build_unit_distance_graph, complement_triangle_free, is_almost_equidistant
from aeq.realize import realize_graph
from aeq.render import render_svg

logger = logging.getLogger("aeq.cli")

EXIT_PASS = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


@dataclass
class CommandResult:
    exit_code: int
    report: dict


class _UsageError(Exception):
    pass


class _JsonArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors reach main() instead of exiting."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _summary(rows, headers=()):
    print(tabulate(rows, headers=headers), file=sys.stderr)


def cmd_verify(args, tol):
    ps = read_point_set(args.file)
    verdict = is_almost_equidistant(ps, tol)
    g = build_unit_distance_graph(ps, tol)
    report = {
        "command": "verify",
        "file": args.file,
        "n": ps.n,
        "dim": ps.dim,
        "almost_equidistant": verdict.holds,
        "witness": verdict.to_dict()["witness"],
        "complement_triangle_free": complement_triangle_free(g).holds,
        "unit_edges": len(g.edges),
        "tolerance": tol.to_dict(),
    }
    _summary([
        ["points", ps.n],
        ["unit edges", len(g.edges)],
        ["almost-equidistant", "yes" if verdict else f"no, witness {verdict.witness}"],
    ])
    return CommandResult(EXIT_PASS if verdict else EXIT_VERDICT, report)


def cmd_construct(args, tol):
    ps = construct(args.kind, args.dim, args.points)
    g = build_unit_distance_graph(ps, tol)
    report = {
        "command": "construct",
        "kind": args.kind,
        "dim": ps.dim,
        "n_points": ps.n,
        "unit_edges": len(g.edges),
        "almost_equidistant": is_almost_equidistant(ps, tol).holds,
        "out": args.out,
    }
    if args.out:
        write_point_set(args.out, ps)
    else:
        report["point_set"] = ps.to_dict()
    _summary([["kind", args.kind], ["dim", ps.dim], ["points", ps.n], ["unit edges", len(g.edges)]])
    return CommandResult(EXIT_PASS, report)


def cmd_audit(args, tol):
    ps = read_point_set(args.file)
    report = audit(ps, tol, heuristic_clique=args.heuristic_clique, clique_limit=args.clique_limit)

    _summary(
        [[c.name, "pass" if c.passed else "FAIL", "yes" if c.conditional else "", c.detail] for c in report.exact_checks],
        headers=["check", "result", "conditional", "detail"],
    )
    _summary([[name, f"{value:.6g}"] for name, value in report.margins.items()], headers=["margin", "value"])
    claim2 = report.claim2_table()
    if not claim2.empty:
        _summary(claim2.head(20).values.tolist(), headers=list(claim2.columns))

    doc = {"command": "audit", "file": args.file, **report.to_dict(), "tolerance": tol.to_dict()}
    return CommandResult(EXIT_PASS if report.passed else EXIT_VERDICT, doc)


def cmd_realize(args, tol):
    g = read_graph(args.file)
    result = realize_graph(g, args.dim, restarts=args.restarts, seed=args.seed, tol=tol, threads=args.threads)

    report = {"command": "realize", "file": args.file, "dim": args.dim, "seed": args.seed, **result.to_dict()}
    if result.success and args.out:
        write_point_set(args.out, result.points)
        report["out"] = args.out
        report.pop("point_set", None)
    report["tolerance"] = tol.to_dict()

    _summary([
        ["vertices", g.n],
        ["edges", len(g.edges)],
        ["realized", "yes" if result.success else "no"],
        ["best stress", f"{result.best_stress:.3e}"],
        ["restart", result.restart],
    ])
    return CommandResult(EXIT_PASS if result.success else EXIT_VERDICT, report)


def cmd_bounds(args, tol):
    table = load_bounds_table(args.bounds_file)
    bounds = bounds_for_dimension(args.dim, table)
    _summary([[
        bounds.d, bounds.lower, bounds.upper if bounds.upper is not None else "-",
        bounds.ramsey_upper if bounds.ramsey_upper is not None else "-", bounds.statement,
    ]], headers=["d", "lower", "upper", "ramsey", "statement"])
    return CommandResult(EXIT_PASS, {"command": "bounds", **bounds.to_dict()})


def cmd_render(args, tol):
    ps = read_point_set(args.file)
    out = args.out or str(Path(args.file).with_suffix(".svg"))
    g = render_svg(ps, out, tol)
    _summary([["points", ps.n], ["unit edges", len(g.edges)], ["svg", out]])
    return CommandResult(EXIT_PASS, {
        "command": "render",
        "file": args.file,
        "out": out,
        "points": ps.n,
        "unit_edges": len(g.edges),
    })


def cmd_ramsey(args, tol):
    check = verify_ramsey_33()
    _summary([[key, value] for key, value in check.to_dict().items()])
    return CommandResult(EXIT_PASS if check.passed else EXIT_VERDICT, {"command": "ramsey", **check.to_dict()})


def _common_options():
    # SUPPRESS lets the same flags sit before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=argparse.SUPPRESS, help="unit-distance tolerance eps_unit")
    common.add_argument(
        "--tol-file", default=argparse.SUPPRESS,
        help=f"JSON tolerance file (also read from ${TOL_FILE_ENV})",
    )
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads (default: all cores)")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS, help="-v info, -vv debug")
    return common


def build_parser():
    common = _common_options()
    parser = _JsonArgumentParser(
        prog="aeq",
        description="Almost-equidistant point sets: verify, construct, audit, realize, bound, render.",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_JsonArgumentParser)

    verify = commands.add_parser("verify", parents=[common], help="check the almost-equidistant property")
    verify.add_argument("file")
    verify.set_defaults(handler=cmd_verify)

    constructs = commands.add_parser("construct", parents=[common], help="write a constructed point set")
    constructs.add_argument("kind", choices=CONSTRUCTION_KINDS)
    constructs.add_argument("--dim", type=int)
    constructs.add_argument("--points", type=int, help="simplex only: number of vertices (default dim + 1)")
    constructs.add_argument("--out")
    constructs.set_defaults(handler=cmd_construct)

    audits = commands.add_parser("audit", parents=[common], help="audit every exact step of the upper bound")
    audits.add_argument("file")
    audits.add_argument("--heuristic-clique", action="store_true")
    audits.add_argument("--clique-limit", type=int, default=CLIQUE_SEARCH_LIMIT)
    audits.set_defaults(handler=cmd_audit)

    realize = commands.add_parser("realize", parents=[common], help="realize a graph as a unit-distance graph")
    realize.add_argument("file")
    realize.add_argument("--dim", type=int, required=True)
    realize.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    realize.add_argument("--seed", type=int, default=DEFAULT_SEED)
    realize.add_argument("--out")
    realize.set_defaults(handler=cmd_realize)

    bounds = commands.add_parser("bounds", parents=[common], help="known bounds on f(d)")
    bounds.add_argument("--dim", type=int, required=True)
    bounds.add_argument("--bounds-file")
    bounds.set_defaults(handler=cmd_bounds)

    render = commands.add_parser("render", parents=[common], help="draw a planar point set as SVG")
    render.add_argument("file")
    render.add_argument("--out")
    render.set_defaults(handler=cmd_render)

    ramsey = commands.add_parser("ramsey", parents=[common], help="check R(3,3) = 6 exhaustively")
    ramsey.set_defaults(handler=cmd_ramsey)
    return parser


def exit_code_for(error):
    if isinstance(error, (InputError, CliqueLimitError)):
        return EXIT_USAGE
    return EXIT_VERDICT


def error_document(command, error, exit_code):
    detail = {"type": type(error).__name__, "message": str(error)}
    if isinstance(error, InputError):
        detail["field"] = error.field
        detail["line"] = error.line
    if isinstance(error, NotAlmostEquidistantError):
        detail["witness"] = [int(i) for i in error.witness]
    return {"command": command, "exit_code": exit_code, "error": detail}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(dumps(error_document(None, e, EXIT_USAGE)))
        print(str(e), file=sys.stderr)
        return EXIT_USAGE

    configure_logging(getattr(args, "verbose", 0))
    args.threads = getattr(args, "threads", None)
    try:
        tol = resolve_tolerance(tol_file=getattr(args, "tol_file", None), eps=getattr(args, "eps", None))
        result = args.handler(args, tol)
    except AeqError as e:
        code = exit_code_for(e)
        logger.error("%s: %s", args.command, e)
        print(dumps(error_document(args.command, e, code)))
        return code

    print(dumps(result.report))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
