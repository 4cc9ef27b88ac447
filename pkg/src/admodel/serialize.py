"""JSON encoding of modules, objects, morphisms, Burnside elements and dg categories.

Rationals are strings ``"a/b"`` (plain integers are accepted on input).
Matrices are lists of rows.  Degree-keyed maps use string keys.

Module::

    {"dims": {"0": 2}, "d": {"1": [[...]]}, "w": {"0": [[0, 1], [1, 0]]}}

``w`` is present exactly when the module carries a W-action; an empty
object means the trivial action.  Object::

    {"stalks": [module, ...], "tail": module, "infinity": module,
     "sigma": {"0": [[...]]}}

``window`` is accepted and checked against the number of stalks.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List

from .burnside import BurnsideElement
from .dg import ChainMap, DGModule, ValidationError
from .linalg import QMatrix, format_rational
from .model.objects import DihedralMorphism, DihedralObject


class InputError(ValueError):
    """Malformed or invalid input; the message starts with the location."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# ---------------------------------------------------------------------------
# encoding

def q(x: Fraction) -> str:
    return format_rational(x)


def matrix_json(m: QMatrix) -> List[List[str]]:
    return [[q(x) for x in row] for row in m.tolist()]


def _degree_map(maps: Dict[int, QMatrix]) -> Dict[str, List[List[str]]]:
    return {str(n): matrix_json(m) for n, m in sorted(maps.items())}


def module_json(m: DGModule) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "dims": {str(n): k for n, k in m.dims.items()},
        "d": _degree_map({n: m.diff(n) for n in m.support if not m.diff(n).is_zero()}),
    }
    if m.equivariant:
        out["w"] = _degree_map({n: m.inv(n) for n in m.support if not m.inv(n).is_identity()})
    return out


def chain_map_json(f: ChainMap) -> Dict[str, List[List[str]]]:
    return _degree_map({n: f[n] for n in f.source.support if f.target.dim(n)})


def object_json(v: DihedralObject) -> Dict[str, Any]:
    return {"window": v.window, "stalks": [module_json(s) for s in v.stalks],
            "tail": module_json(v.tail), "infinity": module_json(v.infinity),
            "sigma": chain_map_json(v.sigma)}


def morphism_json(f: DihedralMorphism) -> Dict[str, Any]:
    return {"source": object_json(f.source), "target": object_json(f.target),
            "f_k": [chain_map_json(f.stalk(k)) for k in range(1, f.window + 1)],
            "f_tail": chain_map_json(f.tail), "f_infinity": chain_map_json(f.infinity)}


def burnside_json(x: BurnsideElement) -> Dict[str, Any]:
    return {"so2": q(x.so2), "window": [q(v) for v in x.window], "limit": q(x.limit)}


def category_json(e) -> Dict[str, Any]:
    """Objects, hom complexes and composition tensors of a ``DGCategory``."""
    comp = []
    for (x, y, z), c in sorted(e.composition.items()):
        comp.append({"objects": [x, y, z],
                     "map": {str(n): matrix_json(c[n]) for n in c.source.support
                             if c.target.dim(n)}})
    homs = [{"source": x, "target": y, "complex": module_json(m)}
            for (x, y), m in sorted(e.homs.items())]
    out = {"objects": list(e.objects), "cutoff": e.cutoff, "homs": homs, "composition": comp,
           "units": {x: [q(v) for v in u] for x, u in e.units.items()}}
    if e.growth:
        out["growth"] = {f"{x}->{y}": g.describe() for (x, y), g in sorted(e.growth.items())}
    if e.tensor_table:
        out["tensor"] = {f"{x}*{y}": t for (x, y), t in sorted(e.tensor_table.items())}
    return out


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# decoding

def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def parse_rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool):
        raise InputError(where, "expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InputError(where, f"expected a rational like \"a/b\", got {x!r}")


def parse_matrix(x: Any, rows: int, cols: int, where: str) -> QMatrix:
    if rows == 0 or cols == 0:
        if x not in ([], [[]]) and not (isinstance(x, list) and all(r == [] for r in x)):
            raise InputError(where, f"expected an empty {rows}x{cols} matrix")
        return QMatrix.zero(rows, cols)
    if not isinstance(x, list) or len(x) != rows:
        raise InputError(where, f"expected {rows} rows")
    data = []
    for i, row in enumerate(x):
        if not isinstance(row, list) or len(row) != cols:
            raise InputError(f"{where}[{i}]", f"expected {cols} entries")
        data.append([parse_rational(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return QMatrix(data)


def _dict(x: Any, where: str) -> Dict[str, Any]:
    if not isinstance(x, dict):
        raise InputError(where, "expected an object")
    return x


def _degree(key: str, where: str) -> int:
    try:
        return int(key)
    except ValueError:
        raise InputError(where, f"degree key {key!r} is not an integer") from None


def parse_module(x: Any, where: str = "module", equivariant: bool = False) -> DGModule:
    x = _dict(x, where)
    dims = {}
    for key, k in _dict(x.get("dims", {}), f"{where}.dims").items():
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise InputError(f"{where}.dims.{key}", "expected a nonnegative integer")
        dims[_degree(key, f"{where}.dims")] = k
    dim = lambda n: dims.get(n, 0)
    d = {}
    for key, m in _dict(x.get("d", {}), f"{where}.d").items():
        n = _degree(key, f"{where}.d")
        d[n] = parse_matrix(m, dim(n - 1), dim(n), f"{where}.d.{key}")
    w = None
    if "w" in x or equivariant:
        w = {}
        for key, m in _dict(x.get("w", {}), f"{where}.w").items():
            n = _degree(key, f"{where}.w")
            w[n] = parse_matrix(m, dim(n), dim(n), f"{where}.w.{key}")
    try:
        return DGModule(dims, d, w)
    except ValidationError as exc:
        raise InputError(where, str(exc)) from None


def parse_chain_map(x: Any, source: DGModule, target: DGModule, where: str) -> ChainMap:
    comps = {}
    for key, m in _dict(x, where).items():
        n = _degree(key, where)
        comps[n] = parse_matrix(m, target.dim(n), source.dim(n), f"{where}.{key}")
    try:
        return ChainMap(source, target, comps)
    except ValidationError as exc:
        raise InputError(where, str(exc)) from None


def parse_object(x: Any, where: str = "object") -> DihedralObject:
    x = _dict(x, where)
    stalks_raw = x.get("stalks", [])
    if not isinstance(stalks_raw, list):
        raise InputError(f"{where}.stalks", "expected a list")
    stalks = [parse_module(s, f"{where}.stalks[{k}]", True) for k, s in enumerate(stalks_raw)]
    if "window" in x and x["window"] != len(stalks):
        raise InputError(f"{where}.window", f"window {x['window']} but {len(stalks)} stalks given")
    tail = parse_module(x.get("tail", {}), f"{where}.tail", True)
    inf = parse_module(x.get("infinity", {}), f"{where}.infinity")
    sigma = parse_chain_map(x.get("sigma", {}), inf, tail.forget_action(), f"{where}.sigma")
    try:
        return DihedralObject(stalks, tail, inf, sigma)
    except ValidationError as exc:
        raise InputError(f"{where}.sigma", str(exc)) from None


def parse_burnside(x: Any, where: str = "burnside") -> BurnsideElement:
    x = _dict(x, where)
    window = x.get("window", [])
    if not isinstance(window, list):
        raise InputError(f"{where}.window", "expected a list")
    return BurnsideElement(parse_rational(x.get("so2", 0), f"{where}.so2"),
                           [parse_rational(v, f"{where}.window[{i}]")
                            for i, v in enumerate(window)],
                           parse_rational(x.get("limit", 0), f"{where}.limit"))


def objects_from(data: Any, where: str = "input") -> List[DihedralObject]:
    """One object or a list of objects."""
    if isinstance(data, list):
        return [parse_object(x, f"{where}[{i}]") for i, x in enumerate(data)]
    return [parse_object(data, where)]

