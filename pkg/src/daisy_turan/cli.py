"""Command-line dispatcher: ``daisy-turan <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 bound violation, 4 resource refusal.
"""
from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path

from . import constructions, daisy, family, hypercube, products, report
from .errors import BoundViolation, InfeasibleError, InvalidInputError, ResourceRefusal
from .search import SolverConfig, default_node_limit

EXIT_OK, EXIT_INVALID, EXIT_BOUND, EXIT_REFUSED = 0, 2, 3, 4


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--output", type=Path, help="write the result here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--split-depth", type=int, default=0)
    p.add_argument("--symmetry", choices=("on", "off"), default="off")
    p.add_argument("--seedless", action="store_true", help="greedy incumbent only (always the case)")
    return p


def _pattern_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pattern", help="daisy pattern r,s,t")
    g.add_argument("--daisy", type=int, metavar="R", help="plain daisy, same as --pattern R,4,2")


def _pattern(args) -> daisy.DaisyPattern | None:
    if args.pattern:
        return daisy.DaisyPattern.parse(args.pattern)
    if args.daisy is not None:
        return daisy.DaisyPattern.plain(args.daisy)
    return None


def _config(args) -> SolverConfig:
    return SolverConfig(
        node_limit=args.node_limit if args.node_limit is not None else default_node_limit(),
        workers=args.workers,
        split_depth=args.split_depth,
        symmetry=args.symmetry == "on",
    )


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="daisy-turan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ex", parents=[common], help="exact ex(n, F)")
    _pattern_args(p)
    p.add_argument("--forbidden", type=Path, help="family file of the forbidden hypergraph")
    p.add_argument("--n", type=int)
    p.add_argument("--n-from", type=int)
    p.add_argument("--n-to", type=int)

    p = sub.add_parser("construct", parents=[common], help="explicit constructions")
    csub = p.add_subparsers(dest="kind", required=True)
    csub.add_parser("fano-complement", parents=[common])
    q = csub.add_parser("iterated-fano", parents=[common])
    q.add_argument("--k", type=int, required=True)
    q = csub.add_parser("multipartite", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q = csub.add_parser("parity", parents=[common])
    for name in ("n", "k", "r"):
        q.add_argument(f"--{name}", type=int, required=True)
    q.add_argument("--delta", type=int, default=1)
    q = csub.add_parser("layers", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--offset", type=int, default=0)

    p = sub.add_parser("check", parents=[common], help="daisy-freeness of a family file")
    _pattern_args(p)
    p.add_argument("--input", type=Path, required=True)

    p = sub.add_parser("cube", parents=[common], help="hypercube transversals")
    qsub = p.add_subparsers(dest="kind", required=True)
    q = qsub.add_parser("transversal", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--middle", action="store_true")
    q.add_argument("--middle-layer-only", action="store_true")
    q = qsub.add_parser("jt-check", parents=[common])
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--input", type=Path, required=True)
    q = qsub.add_parser("td-table", parents=[common])
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("product", parents=[common], help="star products")
    psub = p.add_subparsers(dest="kind", required=True)
    q = psub.add_parser("star", parents=[common])
    q.add_argument("--f", type=Path, required=True)
    q.add_argument("--g", type=Path, required=True)
    q = psub.add_parser("power", parents=[common])
    q.add_argument("--f", type=Path, required=True)
    q.add_argument("--d", type=int, required=True)

    p = sub.add_parser("report", parents=[common], help="ex table with bound verification")
    _pattern_args(p)
    p.add_argument("--n-from", type=int)
    p.add_argument("--n-to", type=int)
    p.add_argument("--input", type=Path, help="verify an exported JSON table instead of computing one")
    return parser


def _emit(text: str, args) -> None:
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def _emit_family(f: family.SetFamily, args) -> None:
    if args.format == "json":
        _emit(json.dumps(family.family_to_json(f)) + "\n", args)
    else:
        _emit(family.format_family_text(f), args)


def _emit_records(records, args) -> None:
    fmt = args.format if args.format in ("json", "csv") else "json"
    _emit(report.export(records, fmt), args)


def _n_range(args) -> tuple[int, int]:
    if args.n is not None:
        return args.n, args.n
    if args.n_from is None or args.n_to is None:
        raise InvalidInputError("give --n or both --n-from and --n-to")
    return args.n_from, args.n_to


def _cmd_ex(args) -> int:
    pattern = _pattern(args)
    if pattern is not None and args.forbidden:
        raise InvalidInputError("--forbidden cannot be combined with a daisy pattern")
    if pattern is None and not args.forbidden:
        raise InvalidInputError("give --pattern, --daisy or --forbidden")
    problem = pattern or products.UniformHypergraph(family.read_family(args.forbidden))
    lo, hi = _n_range(args)
    _emit_records(report.ex_table(problem, lo, hi, _config(args)), args)
    return EXIT_OK


def _cmd_construct(args) -> int:
    if args.kind == "fano-complement":
        _emit_family(constructions.fano_complement(), args)
    elif args.kind == "iterated-fano":
        _emit_family(constructions.iterated_fano(args.k), args)
    elif args.kind == "multipartite":
        _emit_family(constructions.complete_multipartite(args.n, args.r), args)
    elif args.kind == "parity":
        _emit_family(constructions.parity_family(args.n, args.k, args.r, args.delta), args)
    elif args.kind == "layers":
        _emit(hypercube.format_vertex_set(hypercube.layered_transversal(args.n, args.d, args.offset)), args)
    return EXIT_OK


def _cmd_check(args) -> int:
    pattern = _pattern(args)
    if pattern is None:
        raise InvalidInputError("give --pattern or --daisy")
    f = family.read_family(args.input)
    inst = daisy.find_daisy(f, pattern)
    out = {
        "pattern": pattern.label(),
        "size": f.size(),
        "daisy_free": inst is None,
        "witness": None if inst is None else {"P": list(inst.P), "Q": list(inst.Q)},
        "count": daisy.daisy_count(f, pattern),
    }
    _emit(json.dumps(out) + "\n", args)
    return EXIT_OK


def _cmd_cube(args) -> int:
    if args.kind == "transversal":
        res = hypercube.min_subcube_transversal(args.n, args.d, args.middle, args.middle_layer_only, _config(args))
        out = {
            "n": args.n,
            "d": args.d,
            "middle": args.middle,
            "middle_layer_only": args.middle_layer_only,
            "minimum": res.objective,
            "status": res.status,
            "nodes": res.nodes_explored,
            "witness": [hypercube.vertex_to_bitstring(v, args.n) for v in res.witness],
        }
        _emit(json.dumps(out) + "\n", args)
    elif args.kind == "jt-check":
        vs = hypercube.read_vertex_set(args.input)
        best, cube = hypercube.max_points_in_some_dcube(vs, args.d)
        out = {
            "n": vs.n,
            "d": args.d,
            "max_points": best,
            "target": comb(args.d, args.d // 2),
            "subcube": {"fixed_ones": list(cube.fixed_elements()), "free": list(cube.free_elements())},
        }
        _emit(json.dumps(out) + "\n", args)
    elif args.kind == "td-table":
        rows = hypercube.td_evidence_table(args.d, range(args.d, args.n_max + 1), _config(args))
        report.verify_bounds(rows)
        _emit_records(rows, args)
    return EXIT_OK


def _cmd_product(args) -> int:
    F = products.UniformHypergraph(family.read_family(args.f))
    if args.kind == "star":
        out = products.star_product(F, products.UniformHypergraph(family.read_family(args.g)))
    else:
        out = products.power(F, args.d)
    _emit_family(out.edges, args)
    return EXIT_OK


def _cmd_report(args) -> int:
    if args.input:
        rows = report.read_json_records(args.input.read_text())
    else:
        pattern = _pattern(args)
        if pattern is None or args.n_from is None or args.n_to is None:
            raise InvalidInputError("give --pattern/--daisy with --n-from and --n-to, or --input")
        rows = report.ex_table(pattern, args.n_from, args.n_to, _config(args))
    bad = report.nonincreasing_violations(rows)
    if bad:
        raise BoundViolation(f"density increases between n={bad[0][0]} and n={bad[0][1]}")
    checks = report.verify_bounds(rows)
    if args.format in ("json", "csv"):
        _emit_records(rows, args)
    else:
        _emit(report.format_table(rows) + f"\n{len(checks.checks)} bound checks passed\n", args)
    return EXIT_OK


COMMANDS = {
    "ex": _cmd_ex,
    "construct": _cmd_construct,
    "check": _cmd_check,
    "cube": _cmd_cube,
    "product": _cmd_product,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BoundViolation as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except ResourceRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (InvalidInputError, InfeasibleError, FileNotFoundError, IndexError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
