"""Command-line front end.

Exit status: 0 on success, 1 when a check finds an axiom violation, 2 on
malformed input.  Reports go to standard output, diagnostics to standard
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog as cat
from .algebroid import Section, UniverseError, adiabatic, bracket, check_axioms, poisson
from .groupoid import (check_groupoid, convolve, family_from_kernel, kernel_from_family,
                       represent)
from .poly import ParseError, Poly, evaluate, parse_poly
from .schema import (SchemaError, algebroid_to_dict, bundle_from_dict, dump_json,
                     groupoid_to_dict, kernel_to_dict, load_algebroid, load_groupoid,
                     load_kernel, read_json, section_from_dict, section_to_dict)
from .uea import enveloping, parse_element, parse_words, star


class Failure(Exception):
    """A computation detected a violated axiom; carries the report."""

    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


def _fiber(A, text: str) -> Poly:
    return A.check_fiber_poly(parse_poly(text), allow_t=True)


def _section(A, text: str) -> Section:
    gens = {f"e{i + 1}": f"xi{i + 1}" for i in range(A.rank)}
    p = evaluate(text, leaf=lambda v: Poly.var(gens.get(v, v)), add=lambda a, b: a + b,
                 mul=lambda a, b: a * b, neg=lambda a: -a, power=lambda a, n: a ** n,
                 number=Poly.const)
    if p.is_zero():
        return Section([Poly()] * A.rank)
    return A.fiber_to_section(A.check_fiber_poly(p))


def cmd_check_algebroid(args):
    report = check_axioms(load_algebroid(args.file))
    result = {
        "text": "\n".join(report.lines()),
        "json": {
            "antisymmetry": [list(x) for x in report.antisymmetry_failures],
            "anchor_morphism": [list(x) for x in report.anchor_failures],
            "jacobi": [list(x) for x in report.jacobi_failures],
            "ok": report.ok,
        },
    }
    if not report.ok:
        raise Failure(result)
    return result


def cmd_poisson(args):
    A = load_algebroid(args.file)
    return str(poisson(A, _fiber(A, args.f), _fiber(A, args.g)))


def cmd_bracket(args):
    A = load_algebroid(args.file)
    Z = bracket(A, _section(A, args.x), _section(A, args.y))
    return str(A.section_to_fiber(Z))


def _algebra(args):
    A = load_algebroid(args.file)
    if args.adiabatic and not A.is_adiabatic:
        A = A.adiabatic()
    return A


def cmd_normal_form(args):
    A = _algebra(args)
    U = enveloping(A)
    out = U.zero
    for w in parse_words(args.expr, A):
        out = out + U.normal_form(w)
    return str(out)


def cmd_symbol(args):
    A = _algebra(args)
    return str(enveloping(A).symbol(parse_element(args.expr, A)))


def cmd_star(args):
    A = load_algebroid(args.file)
    if A.is_adiabatic:
        raise SchemaError("star expects an undeformed algebroid file")
    return str(star(A, _fiber(A, args.f), _fiber(A, args.g)))


def cmd_adiabatic(args):
    A = load_algebroid(args.file)
    if A.is_adiabatic:
        raise SchemaError("algebroid is already adiabatic")
    data = algebroid_to_dict(adiabatic(A))
    return {"text": dump_json(data).rstrip("\n"), "json": data}


def cmd_groupoid_check(args):
    report = check_groupoid(load_groupoid(args.file))
    result = {"text": "\n".join(report.lines()), "json": {"ok": report.ok}}
    if not report.ok:
        raise Failure(result)
    return result


def cmd_groupoid_convolve(args):
    G = load_groupoid(args.groupoid)
    k = convolve(load_kernel(G, args.k1), load_kernel(G, args.k2))
    data = kernel_to_dict(k)
    return {"text": dump_json(data).rstrip("\n"), "json": data}


def cmd_groupoid_rep(args):
    G = load_groupoid(args.groupoid)
    k = load_kernel(G, args.kernel)
    V = bundle_from_dict(G, read_json(args.bundle))
    bad = V.functoriality_failures()
    if bad:
        raise Failure({"text": f"bundle is not equivariant: {bad[0]}",
                       "json": {"ok": False, "failure": [str(x) for x in bad[0]]}})
    phi = section_from_dict(G, read_json(args.section))
    data = section_to_dict(represent(k, V, phi))
    return {"text": dump_json(data).rstrip("\n"), "json": data}


def cmd_groupoid_roundtrip(args):
    G = load_groupoid(args.groupoid)
    k = load_kernel(G, args.kernel)
    P = family_from_kernel(k)
    witness = P.invariance_violation()
    ok = witness is None and kernel_from_family(P) == k
    result = {"text": f"invariance: {'PASS' if witness is None else 'FAIL'}\n"
                      f"roundtrip: {'PASS' if ok else 'FAIL'}",
              "json": {"invariance": witness is None, "roundtrip": ok}}
    if not ok:
        raise Failure(result)
    return result


def cmd_catalog_list(args):
    lines = []
    for e in cat.catalog():
        p = e.payload
        if e.kind == "algebroid":
            info = f"base_dim={p.base_dim} rank={p.rank}" + (" adiabatic" if p.is_adiabatic else "")
        else:
            info = f"units={len(p.units)} arrows={len(p.arrows)}"
        lines.append(f"{e.name}\t{e.kind}\t{info}")
    return {"text": "\n".join(lines),
            "json": [{"name": e.name, "kind": e.kind} for e in cat.catalog()]}


def cmd_catalog_export(args):
    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for e in cat.catalog():
        data = algebroid_to_dict(e.payload) if e.kind == "algebroid" else groupoid_to_dict(e.payload)
        path = out / f"{e.name}.json"
        path.write_text(dump_json(data), encoding="utf-8")
        written.append(str(path))
    return {"text": "\n".join(written), "json": written}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algebroids", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-algebroid", help="verify the algebroid axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_algebroid)

    for name, func, a, b in (("poisson", cmd_poisson, "f", "g"),
                             ("star", cmd_star, "f", "g"),
                             ("bracket", cmd_bracket, "x", "y")):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument(a)
        p.add_argument(b)
        p.set_defaults(func=func)

    for name, func in (("normal-form", cmd_normal_form), ("symbol", cmd_symbol)):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("expr", help="expression in e1..en and base variables")
        p.add_argument("--adiabatic", action="store_true", help="work in U(A_t)")
        p.set_defaults(func=func)

    p = sub.add_parser("adiabatic", help="print the adiabatic algebroid")
    p.add_argument("file")
    p.set_defaults(func=cmd_adiabatic)

    g = sub.add_parser("groupoid").add_subparsers(dest="action", required=True)
    p = g.add_parser("check")
    p.add_argument("file")
    p.set_defaults(func=cmd_groupoid_check)
    p = g.add_parser("convolve")
    p.add_argument("groupoid")
    p.add_argument("k1")
    p.add_argument("k2")
    p.set_defaults(func=cmd_groupoid_convolve)
    p = g.add_parser("rep")
    p.add_argument("groupoid")
    p.add_argument("kernel")
    p.add_argument("bundle")
    p.add_argument("section")
    p.set_defaults(func=cmd_groupoid_rep)
    p = g.add_parser("kernel-roundtrip")
    p.add_argument("groupoid")
    p.add_argument("kernel")
    p.set_defaults(func=cmd_groupoid_roundtrip)

    c = sub.add_parser("catalog").add_subparsers(dest="action", required=True)
    p = c.add_parser("list")
    p.set_defaults(func=cmd_catalog_list)
    p = c.add_parser("export")
    p.add_argument("directory")
    p.set_defaults(func=cmd_catalog_export)
    return parser


def _emit(result, as_json: bool, command: str, ok: bool) -> None:
    if isinstance(result, str):
        result = {"text": result, "json": result}
    if as_json:
        print(json.dumps({"command": command, "ok": ok, "result": result["json"]},
                         indent=2, ensure_ascii=False, default=str))
    else:
        print(result["text"])


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    try:
        result = args.func(args)
    except Failure as exc:
        _emit(exc.report, args.json, command, False)
        return 1
    except (SchemaError, ParseError, UniverseError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(result, args.json, command, True)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
