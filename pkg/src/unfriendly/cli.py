"""Command-line front end.

Exit codes: 0 ok, 1 negative or unsat verdict, 2 input error, 3 capacity.
Set ``WORKBENCH_LOG`` to ``quiet``, ``info`` or ``trace`` for log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from . import presentation as pres
from .errors import InputError, WorkbenchError
from .finite_solver import extend_pre_partition, unfriendly_partition
from .graph import FiniteGraph, Partition, dumps, is_unfriendly
from .rank import DEFAULT_VERTEX_CEILING, BaseFamily, bounded_rank, naive_rank
from .symbolic import (
    DEFAULT_MAX_EXCEPTIONS,
    DEFAULT_MAX_LEAF,
    check_symbolic,
    instantiate_partition,
    partition_from_json,
    solve_pre_partition,
    solve_unfriendly,
)
from .xval import cross_validate

log = logging.getLogger("unfriendly")

_LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "trace": logging.DEBUG}


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _emit(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _presentation(path: str) -> pres.Presentation:
    p = pres.from_json(_load(path))
    pres.require_valid(p)
    return p


def _parse_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.|-)\s*(\d+)\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        return list(range(lo, hi + 1))
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad n-range {text!r}; use 1..8 or 1,2,5") from None


# ---------------------------------------------------------------- commands

def cmd_solve_finite(args) -> int:
    g = FiniteGraph.from_json(_load(args.graph))
    seed = Partition.from_json(_load(args.seed_partition)) if args.seed_partition else None
    part, trace = unfriendly_partition(g, seed)
    if args.trace:
        _emit(trace.to_json(), args.trace)
    if args.json:
        _emit({"partition": part.to_json(), "trace": trace.to_json()}, args.output)
    else:
        _emit(part.to_json(), args.output)
    return 0


def cmd_extend(args) -> int:
    g = FiniteGraph.from_json(_load(args.graph))
    fixed = Partition.from_json(_load(args.fixed))
    seed = Partition.from_json(_load(args.seed_partition)) if args.seed_partition else None
    part, trace = extend_pre_partition(g, fixed, seed)
    if args.trace:
        _emit(trace.to_json(), args.trace)
    if args.json:
        _emit({"partition": part.to_json(), "trace": trace.to_json()}, args.output)
    else:
        _emit(part.to_json(), args.output)
    return 0


def cmd_rank(args) -> int:
    g = FiniteGraph.from_json(_load(args.graph))
    base = BaseFamily.parse(args.base)
    if args.naive:
        r = naive_rank(g, base, args.k, args.max_vertices)
        payload = None if r is None else {"rank": r}
    else:
        res = bounded_rank(g, base, args.k, args.max_vertices)
        r = None if res is None else res.rank
        payload = None if res is None else res.to_json()
    if r is None:
        print(f"no rank with separators of size <= {args.k}", file=sys.stderr)
        if args.json:
            _emit({"rank": None}, None)
        return 1
    if args.json:
        _emit(payload, None)
    else:
        print(r)
    return 0


def cmd_srank(args) -> int:
    p = _presentation(args.presentation)
    r = pres.structural_rank(p)
    if args.json:
        _emit({"structural_rank": r}, None)
    else:
        print(r)
    return 0


def cmd_atlas(args) -> int:
    p = _presentation(args.presentation)
    atlas = pres.degree_atlas(p)
    if args.json:
        _emit(atlas.to_json(), None)
        return 0
    for addr, e in atlas.entries.items():
        flags = "V*" if e.in_v_star else ("Vinf" if e.in_v_inf else "")
        print(f"{addr:24s} degree={e.degree!s:6s} copies={e.multiplicity!s:6s} {flags}")
    print(f"V* = {atlas.v_star_size}")
    print(f"in-W = {'true' if atlas.v_star_size.is_finite else 'false'}")
    return 0


def cmd_solve(args) -> int:
    p = _presentation(args.presentation)
    if args.fixed:
        fixed = Partition.from_json(_load(args.fixed)).assignments
        sigma = solve_pre_partition(p, fixed, args.max_leaf, args.max_exceptions)
        summary = None
    else:
        sigma, state = solve_unfriendly(p, args.max_leaf, args.max_exceptions)
        summary = {"S0": state.s0, "S1": state.s1, "F": state.F, "used_exceptions": state.used_exceptions}
    _emit(sigma.to_json(), args.output)
    if summary is not None:
        log.info("solver state: %s", summary)
        if args.json and args.output:
            _emit(summary, None)
    return 0


def cmd_check(args) -> int:
    p = _presentation(args.presentation)
    sigma = partition_from_json(_load(args.sigma))
    report = check_symbolic(p, sigma)
    if args.json:
        _emit(report.to_json(), None)
    elif report.ok:
        print("ok: every position is happy")
    else:
        for a in report.unhappy:
            c = report.positions[a]
            print(f"unhappy {a}: degree {c.degree}, opponents {c.opponents}")
    return 0 if report.ok else 1


def cmd_instantiate(args) -> int:
    p = _presentation(args.presentation)
    g, _ = pres.instantiate(p, args.n)
    _emit(g.to_json(), args.output)
    if args.sigma:
        part, _ = instantiate_partition(p, partition_from_json(_load(args.sigma)), args.n)
        if args.partition_out:
            _emit(part.to_json(), args.partition_out)
        if not is_unfriendly(g, part):
            log.info("instantiated partition is not unfriendly at n=%d", args.n)
    return 0


def cmd_xval(args) -> int:
    p = _presentation(args.presentation)
    sigma = partition_from_json(_load(args.sigma))
    report = cross_validate(p, sigma, _parse_range(args.n_range))
    failures = list(report.failures)
    if args.max_n0 is not None:
        failures += [(a, v.n0, f"n0={v.n0} exceeds {args.max_n0}") for a, v in report.verdicts.items()
                     if v.n0 is not None and v.n0 > args.max_n0]
    if args.json:
        _emit(report.to_json(), None)
    else:
        for n in report.ns:
            vs, es = report.sizes[n]
            print(f"n={n}: {vs} vertices, {es} edges")
        for addr, n, why in failures:
            print(f"FAIL {addr} at n={n}: {why}")
        print("pass" if not failures else f"{len(failures)} failing addresses")
    return 0 if not failures else 1


# ---------------------------------------------------------------- parser

def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed-partition", metavar="FILE", default=d(None),
                        help="initial partition for the finite solvers")
    parser.add_argument("--max-leaf", type=int, default=d(DEFAULT_MAX_LEAF),
                        help="largest leaf enumerated exhaustively")
    parser.add_argument("--max-exceptions", type=int, default=d(DEFAULT_MAX_EXCEPTIONS),
                        help="exception copies allowed per family")
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unfriendly", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        _global_flags(sp, suppress=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("solve-finite", cmd_solve_finite, "unfriendly partition of a finite graph")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output")
    sp.add_argument("--trace", metavar="FILE")

    sp = add("extend", cmd_extend, "extend a partial partition so free vertices are happy")
    sp.add_argument("graph")
    sp.add_argument("fixed")
    sp.add_argument("-o", "--output")
    sp.add_argument("--trace", metavar="FILE")

    sp = add("rank", cmd_rank, "bounded separator rank of a finite graph")
    sp.add_argument("graph")
    sp.add_argument("--base", default="edgeless")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--naive", action="store_true", help="use the unmemoised oracle")
    sp.add_argument("--max-vertices", type=int, default=DEFAULT_VERTEX_CEILING)

    sp = add("srank", cmd_srank, "structural rank of a presentation")
    sp.add_argument("presentation")

    sp = add("atlas", cmd_atlas, "infinite-degree positions of a presentation")
    sp.add_argument("presentation")

    sp = add("solve", cmd_solve, "symbolic unfriendly partition of a presentation")
    sp.add_argument("presentation")
    sp.add_argument("-o", "--output")
    sp.add_argument("--fixed", metavar="FILE", help="partition JSON keyed by vertex address")

    sp = add("check", cmd_check, "verify a symbolic partition")
    sp.add_argument("presentation")
    sp.add_argument("sigma")

    sp = add("instantiate", cmd_instantiate, "finite instance with n copies per infinite family")
    sp.add_argument("presentation")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("-o", "--output")
    sp.add_argument("--sigma", metavar="FILE")
    sp.add_argument("--partition-out", metavar="FILE")

    sp = add("xval", cmd_xval, "cross-validate a symbolic partition on finite instances")
    sp.add_argument("presentation")
    sp.add_argument("sigma")
    sp.add_argument("--n-range", default="1..8")
    sp.add_argument("--max-n0", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("WORKBENCH_LOG", "quiet").lower()
    logging.basicConfig(level=_LOG_LEVELS.get(level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
