"""Command-line front end.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .exactmath import rational_rank, same_subspace
from .lattice import (
    CubePoint,
    DegenerateSimplexError,
    LatticeSpec,
    ResourceLimitError,
    build_quotient,
    cube_points,
    format_rational,
    h_star,
    max_points_default,
)
from .span import (
    SeboResult,
    coordinate_classes,
    format_cycles,
    iota_kappa,
    sebo_check,
    vanishing_functionals,
)
from . import verify

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

MAX_VERIFY_ORDER = 64
MAX_VERIFY_MODULUS = 64


class InputError(Exception):
    pass


def _load_json(path: str) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_lattice(path: str) -> LatticeSpec:
    try:
        return LatticeSpec.from_json(_load_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_vertices(path: str) -> list[list[int]]:
    data = _load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("vertices"), list):
        raise InputError(f"{path}: expected an object with a 'vertices' list")
    verts = data["vertices"]
    for k, v in enumerate(verts):
        if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
            raise InputError(f"{path}: vertices[{k}] must be a list of integers")
    return verts


def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


def _one_based(classes) -> list[list[int]]:
    return [[i + 1 for i in c] for c in classes]


def _element_label(p: CubePoint) -> str:
    if len(p.element) == 1:
        return f"k={p.element[0]}"
    return "k=(" + ",".join(map(str, p.element)) + ")"


def sebo_json(result: SeboResult) -> dict:
    if result.holds:
        return {"holds": True, "sigma": format_cycles(result.involution)}
    w = result.witness
    return {
        "holds": False,
        "witness": {
            "element": list(w.element),
            "coords": _vec(w.coords),
            "sum": format_rational(w.total),
            "half_support": format_rational(Fraction(w.support, 2)),
        },
    }


def sebo_line(result: SeboResult) -> str:
    if result.holds:
        return f"holds; sigma = {format_cycles(result.involution)}"
    w = result.witness
    half = format_rational(Fraction(w.support, 2))
    return (
        f"fails; witness {_element_label(w)}: ({', '.join(_vec(w.coords))}) "
        f"sums to {format_rational(w.total)} != {half}"
    )


def span_report(spec: LatticeSpec, max_points: int | None = None) -> dict:
    qg = build_quotient(spec, max_points=max_points)
    points = cube_points(qg, max_points)
    classes = coordinate_classes(qg)
    iota, kappa = iota_kappa(classes)
    dim_brute = rational_rank([list(p.coords) for p in points])
    formula = vanishing_functionals(qg, "formula")
    brute = vanishing_functionals(qg, "bruteforce", max_points)
    equal = same_subspace(formula, brute, qg.n)
    return {
        "n": qg.n,
        "invariant_factors": list(qg.factors),
        "order": qg.order,
        "point_count": len(points),
        "trivial_coords": [i + 1 for i in qg.trivial_coords],
        "i_classes": _one_based(classes.i_classes),
        "k_classes": _one_based(classes.k_classes),
        "iota": iota,
        "kappa": kappa,
        "dim_formula": iota + kappa,
        "dim_bruteforce": dim_brute,
        "vanishing_basis": [_vec(u) for u in formula],
        "subspace_equal": equal,
        "sebo": sebo_json(sebo_check(qg, max_points)),
        "agreement": equal and iota + kappa == dim_brute,
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_analyze(args) -> int:
    report = span_report(load_lattice(args.file), args.max_points)
    if args.json:
        print(_dump(report))
    else:
        print(f"group: {' + '.join(f'Z/{r}' for r in report['invariant_factors']) or 'trivial'}"
              f" (order {report['order']})")
        print(f"box points: {report['point_count']}")
        print(f"I-classes: {report['i_classes']}")
        print(f"K-classes: {report['k_classes']}")
        print(f"iota = {report['iota']}, kappa = {report['kappa']}")
        print(f"span dimension: formula {report['dim_formula']}, brute force {report['dim_bruteforce']}")
        print("vanishing functionals:")
        for u in report["vanishing_basis"]:
            print("  (" + ", ".join(u) + ")")
        if not report["vanishing_basis"]:
            print("  none")
        sebo = report["sebo"]
        print("sebo: " + ("holds; sigma = " + sebo["sigma"] if sebo["holds"] else "fails"))
        print(f"agreement: {'yes' if report['agreement'] else 'NO'}")
    return EXIT_OK if report["agreement"] else EXIT_FAIL


def cmd_sebo(args) -> int:
    qg = build_quotient(load_lattice(args.file), max_points=args.max_points)
    result = sebo_check(qg, args.max_points)
    if args.json:
        print(_dump(sebo_json(result)))
    else:
        print(sebo_line(result))
    return EXIT_OK


def cmd_hstar(args) -> int:
    verts = load_vertices(args.file)
    try:
        h = h_star(verts, args.max_points)
    except DegenerateSimplexError as exc:
        raise InputError(f"{args.file}: degenerate simplex: {exc}") from None
    except ValueError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    if args.json:
        print(_dump({"h_star": h, "normalized_volume": sum(h)}))
    else:
        print(f"h* = ({', '.join(map(str, h))})")
        print(f"sum = {sum(h)}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    qg = build_quotient(load_lattice(args.file), max_points=args.max_points)
    points = cube_points(qg, args.max_points)
    if args.json:
        print(_dump({
            "invariant_factors": list(qg.factors),
            "points": [{"element": list(p.element), "coords": _vec(p.coords)} for p in points],
        }))
    else:
        for p in points:
            print(f"{_element_label(p)}\t({', '.join(_vec(p.coords))})")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite == "chars":
        if not 1 <= args.max_order <= MAX_VERIFY_ORDER:
            raise InputError(f"--max-order must be in [1, {MAX_VERIFY_ORDER}]")
        report = verify.verify_chars(max_order=args.max_order,
                                     poisson_max_order=min(args.poisson_max_order, args.max_order),
                                     seed=args.seed)
    elif args.suite == "dirichlet":
        if not 1 <= args.max_modulus <= MAX_VERIFY_MODULUS:
            raise InputError(f"--max-modulus must be in [1, {MAX_VERIFY_MODULUS}]")
        if args.series_terms < 1:
            raise InputError("--series-terms must be positive")
        report = verify.verify_dirichlet(max_modulus=args.max_modulus,
                                         series_max_order=args.series_max_order,
                                         series_terms=args.series_terms, seed=args.seed)
    else:
        cap = args.max_points or max_points_default()
        if args.instances < 0 or args.max_n < 1 or not 4 <= args.max_order <= cap:
            raise InputError(f"need --instances >= 0, --max-n >= 1 and 4 <= --max-order <= {cap}")
        report = verify.verify_lattice(instances=args.instances, max_n=args.max_n,
                                       max_order=args.max_order, seed=args.seed)
    if args.json:
        print(_dump(report.to_json(timing=args.timing)))
    else:
        status = "pass" if report.passed else "FAIL"
        print(f"{report.suite}: {status} ({report.cases} cases, {len(report.failures)} failures, "
              f"{report.wall_time:.1f}s)")
        for f in report.failures:
            print("  " + json.dumps(f))
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubespan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def lattice_cmd(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--json", action="store_true")
        p.add_argument("--max-points", type=int, default=None)
        p.set_defaults(func=fn)
        return p

    lattice_cmd("analyze", cmd_analyze, "span dimension and vanishing functionals of a lattice")
    lattice_cmd("sebo", cmd_sebo, "balanced box points and the pairing involution")
    lattice_cmd("hstar", cmd_hstar, "h*-vector of a lattice simplex")
    lattice_cmd("enumerate", cmd_enumerate, "list the box points")

    p = sub.add_parser("verify", help="run a verification sweep")
    p.add_argument("suite", choices=verify.SUITES)
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--poisson-max-order", type=int, default=24)
    p.add_argument("--max-modulus", type=int, default=30)
    p.add_argument("--series-max-order", type=int, default=10)
    p.add_argument("--series-terms", type=int, default=verify.dc.DEFAULT_SERIES_TERMS)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-points", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "verify" and args.max_order is None:
        args.max_order = 36 if args.suite == "chars" else 200
    try:
        return args.func(args)
    except (InputError, ResourceLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ArithmeticError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
