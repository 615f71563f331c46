"""Command-line front end.

    yso5 verify so5|ybe|rtt|drinfeld|fock|all [flags]
    yso5 dump gens|relations [flags]

Exit codes: 0 when no check fails, 1 when some check fails, 2 for usage
errors, 3 when the memory budget is exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from .algebra_core import Scalar
from .drinfeld import CW_TABLES
from .fock_chain import BudgetError
from .report import (RunReport, suite_drinfeld, suite_fock, suite_rtt, suite_so5, suite_ybe)
from .rmatrix import GridError
from .rtt_engine import expand_rtt
from .so5_rep import PAIRS, build_spinor_generators, build_vector_generators

__all__ = ["main", "run", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _scalar(text: str) -> Scalar:
    try:
        return Scalar.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _scalar_list(text: str) -> tuple:
    return tuple(_scalar(t) for t in text.split(",") if t.strip())


def _table_list(text: str) -> tuple:
    out = tuple(t.strip() for t in text.split(",") if t.strip())
    bad = [t for t in out if t not in CW_TABLES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown tables {bad}; choose from {list(CW_TABLES)}")
    return out


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="yso5", description="Exact Y(so(5)) verification engine")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this path")
    common.add_argument("--format", choices=("md", "json"), default="md",
                        help="stdout format (default: md)")

    verify = sub.add_parser("verify", help="run verification suites")
    vsub = verify.add_subparsers(dest="suite", required=True)

    vsub.add_parser("so5", parents=[common], help="so(5) closure and level-1 table")

    ybe = vsub.add_parser("ybe", parents=[common], help="Yang-Baxter and unitarity")
    ybe.add_argument("--N", type=int, default=5)
    ybe.add_argument("--x", type=_scalar, default=Scalar(1))
    ybe.add_argument("--grid", type=int, default=7, help="values per variable (>= 7)")

    rtt = vsub.add_parser("rtt", parents=[common], help="RTT relations and constraints")
    rtt.add_argument("--levels", type=_positive, default=2)
    rtt.add_argument("--sites", type=_positive, default=2)
    rtt.add_argument("--x", type=_scalar, default=Scalar(1))
    rtt.add_argument("--thetas", type=_scalar_list, default=None)

    dr = vsub.add_parser("drinfeld", parents=[common], help="Drinfel'd relations and tables")
    dr.add_argument("--source", choices=("lax", "fock"), default="lax")
    dr.add_argument("--L", type=_positive, default=2)
    dr.add_argument("--x", type=_scalar, default=Scalar(1))
    dr.add_argument("--thetas", type=_scalar_list, default=None)
    dr.add_argument("--c", type=_scalar, default=Scalar(1))
    dr.add_argument("--h", type=_scalar, default=None)
    dr.add_argument("--weights", type=_scalar_list, default=None)
    dr.add_argument("--tables", type=_table_list, default=CW_TABLES)
    dr.add_argument("--allow-large", action="store_true")

    fk = vsub.add_parser("fock", parents=[common], help="fermion chain realization")
    fk.add_argument("--L", type=_positive, default=2)
    fk.add_argument("--c", type=_scalar, default=Scalar(1))
    fk.add_argument("--h", type=_scalar, default=None)
    fk.add_argument("--weights", type=_scalar_list, default=None)
    fk.add_argument("--allow-large", action="store_true",
                    help="permit L above the default cap (memory budget still applies)")

    vsub.add_parser("all", parents=[common], help="every suite once with default settings")

    dump = sub.add_parser("dump", help="print generators or extracted relations")
    dsub = dump.add_subparsers(dest="what", required=True)
    g = dsub.add_parser("gens")
    g.add_argument("--rep", choices=("spinor", "vector"), default="spinor")
    g.add_argument("--format", choices=("json", "md"), default="json")
    g.add_argument("--out")
    r = dsub.add_parser("relations")
    r.add_argument("--imax", type=_positive, default=1)
    r.add_argument("--jmax", type=_positive, default=1)
    r.add_argument("--x", type=_scalar, default=Scalar(1))
    r.add_argument("--format", choices=("json", "md"), default="json")
    r.add_argument("--out")
    return p


def _thetas(args, n):
    if args.thetas is None:
        return tuple(Scalar(k) for k in range(n))
    if len(args.thetas) != n:
        raise UsageError(f"expected {n} thetas, got {len(args.thetas)}")
    return args.thetas


def _verify(args) -> RunReport:
    s = args.suite
    cfg = {"command": f"verify {s}"}
    rep = RunReport(cfg)
    if s in ("so5", "all"):
        rep.add(suite_so5())
    if s == "ybe":
        if args.grid < 7:
            raise UsageError("--grid must be at least 7")
        cfg.update(N=args.N, x=args.x, grid=args.grid)
        rep.add(suite_ybe(args.N, args.x, args.grid))
    if s == "rtt":
        th = _thetas(args, args.sites)
        cfg.update(levels=args.levels, sites=args.sites, x=args.x, thetas=list(th))
        rep.add(suite_rtt(args.levels, args.x, th))
    if s == "drinfeld":
        th = _thetas(args, args.L) if args.source == "lax" else None
        cfg.update(source=args.source, L=args.L, tables=list(args.tables))
        if args.source == "lax":
            cfg.update(x=args.x, thetas=list(th), h=args.h if args.h is not None else Scalar(1),
                       level2_map="J = Cartan-Weyl inverse of the level-2 components, h = 1")
        else:
            cfg.update(c=args.c, h=args.h if args.h is not None else args.c, weights=args.weights)
        rep.add(suite_drinfeld(args.source, args.L, args.x, th, args.c, args.h,
                               args.tables, args.weights, args.allow_large))
    if s == "fock":
        cfg.update(L=args.L, c=args.c, h=args.h if args.h is not None else args.c, weights=args.weights)
        rep.add(suite_fock(args.L, args.c, args.h, args.weights, args.allow_large))
    if s == "all":
        cfg.update(ybe="N=5 x=1 grid=7", rtt="levels=2 thetas=0,1",
                   drinfeld="lax L=2 thetas=0,1", fock="L=2 c=1")
        rep.add(suite_ybe())
        rep.add(suite_rtt())
        rep.add(suite_drinfeld())
        rep.add(suite_fock())
    return rep


def _dump(args) -> str:
    if args.what == "gens":
        gs = build_spinor_generators() if args.rep == "spinor" else build_vector_generators()
        data = {"rep": gs.rep, "dim": gs.dim,
                "generators": {f"{a}{b}": gs.gens[(a, b)].to_json_grid() for a, b in PAIRS}}
        if args.format == "json":
            return json.dumps(data, indent=2) + "\n"
        lines = [f"# {gs.rep} generators (dim {gs.dim})", ""]
        for k, grid in data["generators"].items():
            lines.append(f"## I{k}")
            lines.extend("    " + "  ".join(row) for row in grid)
            lines.append("")
        return "\n".join(lines)
    rs = expand_rtt(args.imax, args.jmax, args.x)
    if args.format == "json":
        return json.dumps(rs.to_json(), indent=2) + "\n"
    lines = [f"# {len(rs)} relations (i_max={args.imax}, j_max={args.jmax}, x={args.x})", ""]
    lines.extend(f"- {r.label}: {r.poly} = 0" for r in rs)
    return "\n".join(lines) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run, write output; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "dump":
            text = _dump(args)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            stdout.write(text)
            return EXIT_OK
        report = _verify(args)
    except BudgetError as exc:
        stderr.write(f"yso5: budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (UsageError, GridError, ValueError) as exc:
        stderr.write(f"yso5: {exc}\n")
        parser.print_usage(stderr)
        return EXIT_USAGE
    text = report.dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    stdout.write(text if args.format == "json" else report.to_markdown())
    return EXIT_OK if report.ok else EXIT_FAIL


def main() -> None:
    try:
        code = run()
    except BrokenPipeError:
        # output piped into a closed reader, e.g. ``| head``
        sys.stderr.close()
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
