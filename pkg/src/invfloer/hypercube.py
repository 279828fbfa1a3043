"""Hyperboxes of chain complexes: validation, stacking and compression."""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .complex import ComplexError, FreeComplex, Generator
from .linalg import Matrix
from .report import Report
from .ring import Ring

Point = tuple[int, ...]


class HyperboxError(ValueError):
    pass


def points_between(lo: Point, hi: Point) -> Iterable[Point]:
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


def leq(a: Point, b: Point) -> bool:
    return all(x <= y for x, y in zip(a, b))


def linf(a: Point, b: Point) -> int:
    return max((abs(x - y) for x, y in zip(a, b)), default=0)


class Hyperbox:
    """Cells indexed by points of E(d) and arrows D^{e,e'} for e < e' with
    |e' - e|_inf <= 1.  Internal differentials live in the cells."""

    def __init__(self, size: Sequence[int], cells: dict[Point, FreeComplex],
                 arrows: dict[tuple[Point, Point], Matrix] | None = None,
                 metadata: dict | None = None) -> None:
        self.size = tuple(int(x) for x in size)
        if any(x < 0 for x in self.size):
            raise HyperboxError("hyperbox sizes must be nonnegative")
        self.cells = {tuple(k): v for k, v in cells.items()}
        expected = set(points_between((0,) * self.dim, self.size))
        if set(self.cells) != expected:
            missing = sorted(expected - set(self.cells))
            extra = sorted(set(self.cells) - expected)
            raise HyperboxError(f"cells do not fill the box (missing {missing[:3]}, extra {extra[:3]})")
        rings = {c.ring for c in self.cells.values()}
        if len(rings) > 1:
            raise HyperboxError("cells use different rings")
        self.ring: Ring = rings.pop()
        self.arrows: dict[tuple[Point, Point], Matrix] = {}
        for (a, b), m in (arrows or {}).items():
            a, b = tuple(a), tuple(b)
            if a == b or not leq(a, b) or linf(a, b) > 1:
                raise HyperboxError(f"arrow {a}->{b} is not admissible")
            if a not in self.cells or b not in self.cells:
                raise HyperboxError(f"arrow {a}->{b} leaves the box")
            if m.shape != (self.cells[a].n, self.cells[b].n):
                raise HyperboxError(f"arrow {a}->{b} has shape {m.shape}")
            if not m.is_zero():
                self.arrows[(a, b)] = m
        self.metadata = dict(metadata or {})

    @property
    def dim(self) -> int:
        return len(self.size)

    def points(self) -> list[Point]:
        return list(points_between((0,) * self.dim, self.size))

    def arrow(self, a: Point, b: Point) -> Matrix:
        if a == b:
            return self.cells[a].d
        m = self.arrows.get((a, b))
        if m is None:
            return Matrix.zero(self.ring, self.cells[a].n, self.cells[b].n)
        return m

    def is_cube(self) -> bool:
        return all(x == 1 for x in self.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hyperbox):
            return NotImplemented
        return (self.size == other.size and self.cells == other.cells
                and self.arrows == other.arrows)

    def __repr__(self) -> str:
        return f"Hyperbox(size={self.size}, {len(self.arrows)} arrows)"

    def admissible_pairs(self) -> Iterable[tuple[Point, Point]]:
        for a in self.points():
            hi = tuple(min(x + 1, s) for x, s in zip(a, self.size))
            for b in points_between(a, hi):
                yield a, b


def relation_sum(H: Hyperbox, a: Point, c: Point) -> Matrix:
    acc = Matrix.zero(H.ring, H.cells[a].n, H.cells[c].n)
    for b in points_between(a, c):
        first = H.arrow(a, b)
        if first.is_zero():
            continue
        second = H.arrow(b, c)
        if second.is_zero():
            continue
        acc = acc + second.compose(first)
    return acc


def validate_hyperbox(H: Hyperbox) -> Report:
    rep = Report("hyperbox")
    bad = []
    for a, c in H.admissible_pairs():
        s = relation_sum(H, a, c)
        if not s.is_zero():
            bad.append((a, c, sum(abs(x - y) for x, y in zip(a, c)), s.nnz()))
    detail = "; ".join(f"{a}->{c} (length {n}, {k} entries)" for a, c, n, k in bad[:5])
    rep.add("structure relation", not bad, detail)
    rep.data["violations"] = bad
    return rep


def total_complex(H: Hyperbox) -> FreeComplex:
    """Direct sum of all cells with every arrow; only meaningful for cubes."""
    offsets: dict[Point, int] = {}
    gens: list[Generator] = []
    for p in H.points():
        offsets[p] = len(gens)
        tag = ",".join(map(str, p))
        gens += [Generator(f"{tag}:{g.name}", g.gr) for g in H.cells[p].generators]
    n = len(gens)
    entries = []
    for p in H.points():
        entries += [(offsets[p] + i, offsets[p] + j, c) for i, j, c in H.cells[p].d.entries()]
    for (a, b), m in H.arrows.items():
        entries += [(offsets[a] + i, offsets[b] + j, c) for i, j, c in m.entries()]
    return FreeComplex(H.ring, gens, Matrix.from_entries(H.ring, n, n, entries))


def face(H: Hyperbox, axis: int, level: int) -> tuple[dict[Point, FreeComplex], dict]:
    cells = {p[:axis] + p[axis + 1:]: c for p, c in H.cells.items() if p[axis] == level}
    arrows = {(a[:axis] + a[axis + 1:], b[:axis] + b[axis + 1:]): m
              for (a, b), m in H.arrows.items() if a[axis] == level and b[axis] == level}
    return cells, arrows


def stack(H1: Hyperbox, H2: Hyperbox, axis: int) -> Hyperbox:
    if H1.dim != H2.dim:
        raise HyperboxError("stacked boxes must have the same dimension")
    if not 0 <= axis < H1.dim:
        raise HyperboxError(f"axis {axis} out of range")
    other1 = H1.size[:axis] + H1.size[axis + 1:]
    other2 = H2.size[:axis] + H2.size[axis + 1:]
    if other1 != other2:
        raise HyperboxError("boxes disagree in the directions transverse to the stacking axis")
    d1 = H1.size[axis]
    c1, a1 = face(H1, axis, d1)
    c2, a2 = face(H2, axis, 0)
    for p in c1:
        if not c1[p].structurally_equal(c2[p]):
            raise HyperboxError(f"face mismatch at cell {p}")
    if a1 != a2:
        raise HyperboxError("face mismatch in the arrows")

    def shift(p: Point) -> Point:
        return p[:axis] + (p[axis] + d1,) + p[axis + 1:]

    size = list(H1.size)
    size[axis] += H2.size[axis]
    cells = dict(H1.cells)
    for p, c in H2.cells.items():
        if p[axis] > 0:
            cells[shift(p)] = c
    arrows = dict(H1.arrows)
    for (a, b), m in H2.arrows.items():
        if a[axis] == 0 and b[axis] == 0:
            continue
        arrows[(shift(a), shift(b))] = m
    return Hyperbox(size, cells, arrows, {"stacked_along": axis})


def compress_axis(H: Hyperbox, axis: int) -> Hyperbox:
    """Collapse one axis to length 1 by composing the chain of cube morphisms."""
    d = H.size[axis]
    if d == 1:
        return H
    if d == 0:
        raise HyperboxError("cannot compress an axis of length 0")
    size = list(H.size)
    size[axis] = 1

    def lift(p: Point, t: int) -> Point:
        return p[:axis] + (t,) + p[axis:]

    cells = {}
    for p in points_between((0,) * H.dim, tuple(size)):
        cells[p] = H.cells[p[:axis] + (d if p[axis] else 0,) + p[axis + 1:]]
    arrows: dict[tuple[Point, Point], Matrix] = {}
    other_size = tuple(s for i, s in enumerate(H.size) if i != axis)
    for lo in points_between((0,) * len(other_size), other_size):
        hi_max = tuple(min(x + 1, s) for x, s in zip(lo, other_size))
        for hi in points_between(lo, hi_max):
            if hi != lo:
                for t in (0, d):
                    m = H.arrows.get((lift(lo, t), lift(hi, t)))
                    if m is not None:
                        arrows[(lift(lo, 1 if t else 0), lift(hi, 1 if t else 0))] = m
            # long arrow from (lo, 0) to (hi, d) via the dynamic programme over paths
            inner = list(points_between(lo, hi))
            start = H.cells[lift(lo, 0)].n
            layer = {lo: Matrix.identity(H.ring, start)}
            for t in range(1, d + 1):
                nxt: dict[Point, Matrix] = {}
                for r in inner:
                    acc = None
                    for q, m in layer.items():
                        if not leq(q, r):
                            continue
                        step = H.arrow(lift(q, t - 1), lift(r, t))
                        if step.is_zero():
                            continue
                        term = step.compose(m)
                        acc = term if acc is None else acc + term
                    if acc is not None and not acc.is_zero():
                        nxt[r] = acc
                layer = nxt
            res = layer.get(hi)
            if res is not None and not res.is_zero():
                arrows[(lift(lo, 0), lift(hi, 1))] = res
    meta = dict(H.metadata)
    meta["axis_order"] = list(meta.get("axis_order", [])) + [axis]
    meta.pop("stacked_along", None)
    return Hyperbox(size, cells, arrows, meta)


def default_axis_order(dim: int) -> list[int]:
    return list(range(dim - 1, -1, -1))


def compress(H: Hyperbox, axis_order: Sequence[int] | None = None) -> Hyperbox:
    order = list(axis_order) if axis_order is not None else default_axis_order(H.dim)
    if sorted(order) != list(range(H.dim)):
        raise HyperboxError(f"axis order {order} is not a permutation of the axes")
    if not validate_hyperbox(H).ok:
        raise HyperboxError("compress needs a valid hyperbox")
    out = Hyperbox(H.size, H.cells, H.arrows, {k: v for k, v in H.metadata.items() if k != "axis_order"})
    for ax in order:
        out = compress_axis(out, ax)
    out.metadata["axis_order"] = order
    return out


def compose_morphisms(f: Hyperbox, g: Hyperbox, axis: int) -> Hyperbox:
    """Compose two boxes of length 1 along ``axis`` viewed as cube morphisms
    (apply f, then g): (g o f)^{e,e''} = sum of g^{e',e''} f^{e,e'}."""
    if f.size[axis] != 1 or g.size[axis] != 1:
        raise HyperboxError("compose_morphisms needs length 1 along the axis")
    src, src_arrows = face(f, axis, 0)
    mid, mid_arrows = face(f, axis, 1)
    mid2, mid2_arrows = face(g, axis, 0)
    tgt, tgt_arrows = face(g, axis, 1)
    for p in mid:
        if not mid[p].structurally_equal(mid2[p]):
            raise HyperboxError("the middle faces do not agree")
    if mid_arrows != mid2_arrows:
        raise HyperboxError("the middle faces do not agree")

    def lift(p: Point, t: int) -> Point:
        return p[:axis] + (t,) + p[axis:]

    cells = {}
    for p, c in src.items():
        cells[lift(p, 0)] = c
    for p, c in tgt.items():
        cells[lift(p, 1)] = c
    arrows = {}
    for (a, b), m in src_arrows.items():
        arrows[(lift(a, 0), lift(b, 0))] = m
    for (a, b), m in tgt_arrows.items():
        arrows[(lift(a, 1), lift(b, 1))] = m
    other = tuple(s for i, s in enumerate(f.size) if i != axis)
    for a in points_between((0,) * len(other), other):
        hi_max = tuple(min(x + 1, s) for x, s in zip(a, other))
        for c in points_between(a, hi_max):
            acc = None
            for b in points_between(a, c):
                fm = f.arrow(lift(a, 0), lift(b, 1))
                gm = g.arrow(lift(b, 0), lift(c, 1))
                if fm.is_zero() or gm.is_zero():
                    continue
                term = gm.compose(fm)
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                arrows[(lift(a, 0), lift(c, 1))] = acc
    return Hyperbox(f.size, cells, arrows)


def one_dimensional(cells: Sequence[FreeComplex], maps: Sequence[Matrix]) -> Hyperbox:
    """Size-(n) box from a chain of complexes and maps between consecutive ones."""
    if len(maps) != len(cells) - 1:
        raise HyperboxError("need one map per consecutive pair of cells")
    return Hyperbox((len(maps),), {(i,): c for i, c in enumerate(cells)},
                    {((i,), (i + 1,)): m for i, m in enumerate(maps)})


def diagonal(H: Hyperbox) -> Matrix:
    """The longest arrow of a cube."""
    if not H.is_cube():
        raise HyperboxError("diagonal needs a cube")
    return H.arrow((0,) * H.dim, (1,) * H.dim)
