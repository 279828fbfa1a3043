"""Reading and writing complexes, maps, iota-complexes, knots and hyperboxes.

Files are JSON documents with a ``kind`` field.  Gradings are integers or
``"p/q"`` strings; coefficients use the text form of :mod:`invfloer.ring`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .complex import ChainMap, ComplexError, FreeComplex, Generator, as_grading
from .hypercube import Hyperbox, HyperboxError
from .involutive import IotaComplex
from .knots import IotaKComplex
from .linalg import Matrix
from .ring import Ring, RingError


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


# -- emitting -------------------------------------------------------------------------

def _grading_value(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _dump(obj: Any, indent: int = 0, width: int = 96) -> str:
    flat = json.dumps(obj, ensure_ascii=False)
    if len(flat) + indent <= width or not isinstance(obj, (dict, list)) or not obj:
        return flat
    pad = " " * (indent + 2)
    if isinstance(obj, dict):
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_dump(v, indent + 2, width)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    items = [pad + _dump(v, indent + 2, width) for v in obj]
    return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"


def dumps(obj: dict) -> str:
    return _dump(obj) + "\n"


def complex_block(c: FreeComplex) -> dict:
    return {
        "mode": str(c.ring),
        "generators": [{"name": g.name, "gr": [_grading_value(x) for x in g.gr]} for g in c.generators],
        "differential": _entries(c.d, c, c),
    }


def _entries(m: Matrix, src: FreeComplex, tgt: FreeComplex) -> list[dict]:
    return [{"from": src.generators[i].name, "to": tgt.generators[j].name, "coeff": str(x)}
            for i, j, x in m.entries()]


def map_block(f: ChainMap) -> dict:
    return {
        "degree": [_grading_value(x) for x in f.degree],
        "equivariance": f.equivariance,
        "entries": _entries(f.matrix, f.source, f.target),
    }


def complex_to_dict(c: FreeComplex) -> dict:
    return {"kind": "complex", **complex_block(c)}


def map_to_dict(f: ChainMap) -> dict:
    return {"kind": "map", "mode": str(f.ring), "source": complex_block(f.source),
            "target": complex_block(f.target), **map_block(f)}


def iota_to_dict(C: IotaComplex) -> dict:
    return {"kind": "iota", **complex_block(C.base), "iota": map_block(C.iota)}


def knot_to_dict(K: IotaKComplex) -> dict:
    base = K.base
    out = {"kind": "knot", **complex_block(base)}
    if base.ring.kind == "UV":
        out["alexander"] = {g.name: _grading_value(base.alexander(i)[0]) for i, g in enumerate(base.generators)}
    else:
        out["alexander"] = {g.name: [_grading_value(a) for a in base.alexander(i)]
                            for i, g in enumerate(base.generators)}
    out["iota_k"] = map_block(K.iota_k)
    if K.flip_maps is not None:
        out["flip_maps"] = [{"from": a, "to": b, "coeff": str(c)} for a, b, c in K.flip_maps]
    if K.metadata:
        out["metadata"] = K.metadata
    return out


def hyperbox_to_dict(H: Hyperbox) -> dict:
    cells = []
    for p in H.points():
        c = H.cells[p]
        blk = complex_block(c)
        cells.append({"eps": list(p), "generators": blk["generators"], "differential": blk["differential"]})
    arrows = []
    for (a, b) in sorted(H.arrows):
        arrows.append({"from": list(a), "to": list(b), "entries": _entries(H.arrows[(a, b)], H.cells[a], H.cells[b])})
    out = {"kind": "hyperbox", "mode": str(H.ring), "size": list(H.size), "cells": cells, "arrows": arrows}
    if H.metadata:
        out["metadata"] = H.metadata
    return out


def to_dict(obj) -> dict:
    if isinstance(obj, FreeComplex):
        return complex_to_dict(obj)
    if isinstance(obj, ChainMap):
        return map_to_dict(obj)
    if isinstance(obj, IotaComplex):
        return iota_to_dict(obj)
    if isinstance(obj, IotaKComplex):
        return knot_to_dict(obj)
    if isinstance(obj, Hyperbox):
        return hyperbox_to_dict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize(obj) -> str:
    return dumps(to_dict(obj))


def save(obj, path: str | Path) -> None:
    Path(path).write_text(serialize(obj), encoding="utf-8")


# -- parsing ----------------------------------------------------------------------------

class _Ctx:
    def __init__(self, text: str) -> None:
        self.text = text

    def locate(self, *needles: str) -> tuple[int | None, int | None]:
        for needle in needles:
            pos = self.text.find(needle)
            if pos >= 0:
                line = self.text.count("\n", 0, pos) + 1
                col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
                return line, col
        return None, None

    def fail(self, message: str, *needles: str) -> ParseError:
        line, col = self.locate(*needles)
        return ParseError(message, line, col)


def _need(d: dict, key: str, ctx: _Ctx, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ctx.fail(f"missing field {key!r} in {where}", where)
    return d[key]


def _grading(raw, ctx: _Ctx, name: str):
    try:
        if not isinstance(raw, list):
            raw = [raw]
        for x in raw:
            if not isinstance(x, (int, str)) or isinstance(x, bool):
                raise ValueError
        return as_grading(Fraction(x) for x in raw)
    except (ValueError, ZeroDivisionError):
        raise ctx.fail(f"bad grading for generator {name!r}", f'"{name}"') from None


def _coeff(ring: Ring, text, ctx: _Ctx):
    if not isinstance(text, str):
        raise ctx.fail(f"coefficient must be a string, got {text!r}", json.dumps(text))
    try:
        return ring.parse_coeff(text)
    except RingError as e:
        raise ctx.fail(f"bad coefficient {text!r}: {e}", json.dumps(text)) from None


def _parse_entries(raw, src: FreeComplex, tgt: FreeComplex, ring: Ring, ctx: _Ctx, where: str) -> Matrix:
    if not isinstance(raw, list):
        raise ctx.fail(f"{where} must be a list", f'"{where}"')
    entries = []
    for e in raw:
        if not isinstance(e, dict):
            raise ctx.fail(f"entry {e!r} in {where} is not an object", f'"{where}"')
        a, b = _need(e, "from", ctx, where), _need(e, "to", ctx, where)
        if a not in src.index:
            raise ctx.fail(f"{where} references missing generator {a!r}", f'"from": "{a}"', f'"{a}"')
        if b not in tgt.index:
            raise ctx.fail(f"{where} references missing generator {b!r}", f'"to": "{b}"', f'"{b}"')
        entries.append((src.index[a], tgt.index[b], _coeff(ring, _need(e, "coeff", ctx, where), ctx)))
    return Matrix.from_entries(ring, src.n, tgt.n, entries)


def _parse_ring(raw, ctx: _Ctx) -> Ring:
    try:
        return Ring.parse(str(raw))
    except RingError as e:
        raise ctx.fail(str(e), '"mode"') from None


def _parse_complex(d: dict, ring: Ring, ctx: _Ctx) -> FreeComplex:
    gens_raw = _need(d, "generators", ctx, "complex")
    if not isinstance(gens_raw, list):
        raise ctx.fail("generators must be a list", '"generators"')
    gens = []
    seen = set()
    for g in gens_raw:
        name = _need(g, "name", ctx, "generator")
        if not isinstance(name, str) or not name:
            raise ctx.fail(f"bad generator name {name!r}", '"name"')
        if name in seen:
            raise ctx.fail(f"duplicate generator {name!r}", f'"{name}"')
        seen.add(name)
        gr = _grading(_need(g, "gr", ctx, f"generator {name}"), ctx, name)
        if len(gr) != ring.grading_length:
            raise ctx.fail(f"generator {name!r} needs {ring.grading_length} grading entries", f'"{name}"')
        gens.append(Generator(name, gr))
    proto = FreeComplex(ring, gens)
    d_mat = _parse_entries(d.get("differential", []), proto, proto, ring, ctx, "differential")
    return FreeComplex(ring, gens, d_mat)


def _parse_map_block(blk: dict, src: FreeComplex, tgt: FreeComplex, ring: Ring, ctx: _Ctx, where: str) -> ChainMap:
    if not isinstance(blk, dict):
        raise ctx.fail(f"{where} must be an object", f'"{where}"')
    deg = blk.get("degree", [0] * ring.grading_length)
    try:
        degree = as_grading(Fraction(x) for x in (deg if isinstance(deg, list) else [deg]))
    except (ValueError, TypeError):
        raise ctx.fail(f"bad degree in {where}", f'"{where}"') from None
    eq = blk.get("equivariance", "plain")
    if eq not in ("plain", "skew"):
        raise ctx.fail(f"equivariance must be plain or skew, got {eq!r}", '"equivariance"')
    mat = _parse_entries(blk.get("entries", []), src, tgt, ring, ctx, where)
    return ChainMap(src, tgt, mat, degree, eq == "skew")


def _check_alexander(K: FreeComplex, raw, ctx: _Ctx) -> None:
    if raw is None:
        return
    if not isinstance(raw, dict):
        raise ctx.fail("alexander must map generator names to gradings", '"alexander"')
    for name, val in raw.items():
        if name not in K.index:
            raise ctx.fail(f"alexander grading for missing generator {name!r}", f'"{name}"')
        vals = val if isinstance(val, list) else [val]
        try:
            got = tuple(Fraction(x) for x in vals)
        except (ValueError, TypeError):
            raise ctx.fail(f"bad Alexander grading for {name!r}", f'"{name}"') from None
        want = K.alexander(K.index[name])
        if got != tuple(want):
            raise ctx.fail(f"grading inconsistency: Alexander grading of {name!r} is {vals} "
                           f"but (gr_u - gr_v)/2 gives {[str(w) for w in want]}", '"alexander"')


def _parse_hyperbox(d: dict, ring: Ring, ctx: _Ctx) -> Hyperbox:
    size = _need(d, "size", ctx, "hyperbox")
    cells = {}
    for c in _need(d, "cells", ctx, "hyperbox"):
        eps = tuple(_need(c, "eps", ctx, "cell"))
        cells[eps] = _parse_complex(c, ring, ctx)
    arrows = {}
    for a in d.get("arrows", []):
        src, tgt = tuple(_need(a, "from", ctx, "arrow")), tuple(_need(a, "to", ctx, "arrow"))
        if src not in cells or tgt not in cells:
            raise ctx.fail(f"arrow {list(src)}->{list(tgt)} references a missing cell", '"arrows"')
        arrows[(src, tgt)] = _parse_entries(a.get("entries", []), cells[src], cells[tgt], ring, ctx,
                                            f"arrow {list(src)}->{list(tgt)}")
    try:
        return Hyperbox(size, cells, arrows, d.get("metadata"))
    except HyperboxError as e:
        raise ctx.fail(str(e), '"size"') from None


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    ctx = _Ctx(text)
    if not isinstance(d, dict):
        raise ParseError("top level must be an object", 1, 1)
    kind = d.get("kind", "complex")
    ring = _parse_ring(_need(d, "mode", ctx, "document"), ctx)
    try:
        if kind == "complex":
            return _parse_complex(d, ring, ctx)
        if kind == "map":
            src = _parse_complex(_need(d, "source", ctx, "map"), ring, ctx)
            tgt = _parse_complex(_need(d, "target", ctx, "map"), ring, ctx)
            return _parse_map_block(d, src, tgt, ring, ctx, "entries")
        if kind == "iota":
            base = _parse_complex(d, ring, ctx)
            iota = _parse_map_block(_need(d, "iota", ctx, "iota-complex"), base, base, ring, ctx, "iota")
            return IotaComplex(base, iota)
        if kind == "knot":
            base = _parse_complex(d, ring, ctx)
            _check_alexander(base, d.get("alexander"), ctx)
            ik = _parse_map_block(_need(d, "iota_k", ctx, "knot"), base, base, ring, ctx, "iota_k")
            flip = None
            if "flip_maps" in d:
                flip = tuple((e["from"], e["to"], e["coeff"]) for e in d["flip_maps"])
            return IotaKComplex(base, ik, flip, d.get("metadata", {}))
        if kind == "hyperbox":
            return _parse_hyperbox(d, ring, ctx)
    except ComplexError as e:
        raise ctx.fail(str(e)) from None
    raise ctx.fail(f"unknown kind {kind!r}", '"kind"')


def load(path: str | Path):
    return loads(Path(path).read_text(encoding="utf-8"))
