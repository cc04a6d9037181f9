"""JSON file formats for algebroids, groupoids, kernels and bundles."""

from __future__ import annotations

import json
from pathlib import Path

from .algebroid import Algebroid, UniverseError
from .groupoid import EquivariantBundle, FiniteGroupoid, ReducedKernel
from .poly import ParseError, Poly, format_rational, parse_poly, parse_rational


class SchemaError(ValueError):
    """Malformed input file."""


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dump_json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _poly(value, where: str) -> Poly:
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a polynomial string")
    if isinstance(value, int):
        return Poly.const(value)
    if not isinstance(value, str):
        raise SchemaError(f"{where}: expected a polynomial string")
    try:
        return parse_poly(value)
    except ParseError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def _int(data: dict, key: str, minimum: int) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise SchemaError(f"'{key}' must be an integer >= {minimum}")
    return value


def algebroid_from_dict(data) -> Algebroid:
    if not isinstance(data, dict):
        raise SchemaError("algebroid file must hold a JSON object")
    k = _int(data, "base_dim", 0)
    n = _int(data, "rank", 1)
    anchor_raw = data.get("anchor", [[0] * k for _ in range(n)] if k == 0 else None)
    if not isinstance(anchor_raw, list) or len(anchor_raw) != n or any(
            not isinstance(row, list) or len(row) != k for row in anchor_raw):
        raise SchemaError(f"'anchor' must be a {n}x{k} array of polynomial strings")
    anchor = [[_poly(v, f"anchor[{i + 1}][{a + 1}]") for a, v in enumerate(row)]
              for i, row in enumerate(anchor_raw)]
    brackets: dict = {}
    entries = data.get("structure", [])
    if not isinstance(entries, list):
        raise SchemaError("'structure' must be a list")
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict) or not {"i", "j", "k", "c"} <= set(entry):
            raise SchemaError(f"structure[{pos}] needs keys i, j, k, c")
        i, j, kk = entry["i"], entry["j"], entry["k"]
        if not all(isinstance(v, int) and not isinstance(v, bool) and 1 <= v <= n
                   for v in (i, j, kk)):
            raise SchemaError(f"structure[{pos}]: indices must lie in 1..{n}")
        if i >= j:
            raise SchemaError(f"structure[{pos}]: entries need i < j, got ({i},{j})")
        coeffs = brackets.setdefault((i - 1, j - 1), [Poly()] * n)
        if coeffs[kk - 1]:
            raise SchemaError(f"structure[{pos}]: duplicate entry ({i},{j},{kk})")
        coeffs[kk - 1] = _poly(entry["c"], f"structure[{pos}].c")
    adiabatic = data.get("adiabatic", False)
    if not isinstance(adiabatic, bool):
        raise SchemaError("'adiabatic' must be true or false")
    name = data.get("name")
    try:
        return Algebroid.from_brackets(k, n, anchor, brackets, adiabatic=adiabatic,
                                       name=name if isinstance(name, str) else None)
    except UniverseError as exc:
        raise SchemaError(str(exc)) from None


def algebroid_to_dict(A: Algebroid) -> dict:
    data: dict = {}
    if A.name:
        data["name"] = A.name
    data["base_dim"] = A.base_dim
    data["rank"] = A.rank
    if A.is_adiabatic:
        data["adiabatic"] = True
    data["anchor"] = [[str(p) for p in row] for row in A.anchor]
    data["structure"] = [
        {"i": i + 1, "j": j + 1, "k": k + 1, "c": str(c)}
        for i in range(A.rank) for j in range(i + 1, A.rank)
        for k, c in enumerate(A.structure[i][j]) if c
    ]
    return data


def load_algebroid(path) -> Algebroid:
    return algebroid_from_dict(read_json(path))


def groupoid_from_dict(data) -> FiniteGroupoid:
    if not isinstance(data, dict):
        raise SchemaError("groupoid file must hold a JSON object")
    try:
        units = [str(u) for u in data["units"]]
        arrows = {}
        for a in data["arrows"]:
            arrows[str(a["id"])] = (str(a["d"]), str(a["r"]))
        mul = {}
        for triple in data["mul"]:
            if not isinstance(triple, list) or len(triple) != 3:
                raise SchemaError("'mul' entries must be [a, b, ab] triples")
            key = (str(triple[0]), str(triple[1]))
            if key in mul:
                raise SchemaError(f"duplicate product entry for {key}")
            mul[key] = str(triple[2])
        inv = {str(g): str(h) for g, h in data["inv"].items()}
        unit_arrows = {str(x): str(u) for x, u in data["unit_arrows"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"groupoid file is missing or misshapes field {exc}") from None
    try:
        return FiniteGroupoid(units, arrows, mul, inv, unit_arrows,
                              name=data.get("name") if isinstance(data.get("name"), str) else None)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def groupoid_to_dict(G: FiniteGroupoid) -> dict:
    data: dict = {}
    if G.name:
        data["name"] = G.name
    data["units"] = list(G.units)
    data["arrows"] = [{"id": g, "d": G.d[g], "r": G.r[g]} for g in G.arrows]
    data["mul"] = [[g, h, gh] for (g, h), gh in G.mul.items()]
    data["inv"] = dict(G.inv)
    data["unit_arrows"] = dict(G.unit_arrow)
    return data


def load_groupoid(path) -> FiniteGroupoid:
    return groupoid_from_dict(read_json(path))


def _matrix(value, where: str):
    if not isinstance(value, list) or not value or any(
            not isinstance(row, list) or len(row) != len(value[0]) or not row for row in value):
        raise SchemaError(f"{where}: expected a non-empty rectangular matrix")
    try:
        return [[parse_rational(x) for x in row] for row in value]
    except ParseError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def kernel_from_dict(G: FiniteGroupoid, data) -> ReducedKernel:
    if not isinstance(data, dict):
        raise SchemaError("kernel file must hold a JSON object")
    values = {str(g): _matrix(m, f"kernel[{g}]") for g, m in data.items()}
    try:
        return ReducedKernel(G, values)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def kernel_to_dict(k: ReducedKernel) -> dict:
    return {g: [[format_rational(x) for x in row] for row in k[g]] for g in k.groupoid.arrows}


def load_kernel(G: FiniteGroupoid, path) -> ReducedKernel:
    return kernel_from_dict(G, read_json(path))


def bundle_from_dict(G: FiniteGroupoid, data) -> EquivariantBundle:
    if not isinstance(data, dict) or "rho" not in data:
        raise SchemaError("bundle file needs a 'rho' object")
    rho = {str(g): _matrix(m, f"rho[{g}]") for g, m in data["rho"].items()}
    dims = data.get("dim")
    if dims is None:
        dims = {x: len(rho[G.unit_arrow[x]]) if G.unit_arrow[x] in rho else 1 for x in G.units}
    elif not isinstance(dims, dict):
        raise SchemaError("'dim' must map units to ranks")
    dims = {str(x): n for x, n in dims.items()}
    if set(dims) != set(G.units):
        raise SchemaError("'dim' must cover every unit")
    try:
        return EquivariantBundle(G, dims, rho)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def bundle_to_dict(V: EquivariantBundle) -> dict:
    return {
        "dim": dict(V.dims),
        "rho": {g: [[format_rational(x) for x in row] for row in V.rho[g]]
                for g in V.groupoid.arrows},
    }


def section_from_dict(G: FiniteGroupoid, data) -> dict:
    if not isinstance(data, dict) or set(map(str, data)) != set(G.units):
        raise SchemaError("section file must give a vector for every unit")
    try:
        return {str(x): [parse_rational(c) for c in v] for x, v in data.items()}
    except (ParseError, TypeError) as exc:
        raise SchemaError(f"section: {exc}") from None


def section_to_dict(phi: dict) -> dict:
    return {x: [format_rational(c) for c in v] for x, v in phi.items()}
