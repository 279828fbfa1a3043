"""Regenerate the JSON fixtures shipped in src/invfloer/fixtures/.

Knot involutions are external data; every fixture written here is checked
by the validators before it is saved.
"""

from __future__ import annotations

import sys
from pathlib import Path

from invfloer.complex import ChainMap, FreeComplex
from invfloer.hypercube import Hyperbox, validate_hyperbox
from invfloer.involutive import IotaComplex, validate_iota_complex
from invfloer.io import save
from invfloer.knots import IotaKComplex, split_union, validate_iota_k
from invfloer.linalg import Matrix
from invfloer.ring import U_RING, UQ_RING, UV_RING
from invfloer.surgery import build_involutive_cone, validate_cone

OUT = Path(__file__).resolve().parents[1] / "src" / "invfloer" / "fixtures"


def knot(gens, diff, iota, meta=None) -> IotaKComplex:
    base = FreeComplex.build(UV_RING, gens, diff)
    ik = ChainMap.from_entries(base, base, iota, skew=True)
    return IotaKComplex(base, ik, None, meta or {})


def unknot() -> IotaKComplex:
    return knot([("x", (0, 0))], [], [("x", "x", "1")], {"description": "unknot"})


def trefoil() -> IotaKComplex:
    return knot(
        [("a", (0, -2)), ("b", (-1, -1)), ("c", (-2, 0))],
        [("b", "a", "u"), ("b", "c", "v")],
        [("a", "c", "1"), ("c", "a", "1"), ("b", "b", "1")],
        {"description": "right-handed trefoil staircase"},
    )


FIG8_GENS = [("a", (0, 0)), ("b", (1, -1)), ("c", (-1, 1)), ("d", (0, 0)), ("x", (0, 0))]
FIG8_DIFF = [("a", "b", "u"), ("a", "c", "v"), ("b", "d", "v"), ("c", "d", "u")]


def figure_eight() -> IotaKComplex:
    return knot(
        FIG8_GENS, FIG8_DIFF,
        [("a", "a", "1"), ("a", "x", "1"), ("x", "x", "1"), ("x", "d", "1"),
         ("b", "c", "1"), ("c", "b", "1"), ("d", "d", "1")],
        {"description": "figure-eight: box plus isolated generator"},
    )


def figure_eight_stabilized() -> IotaKComplex:
    return knot(
        FIG8_GENS + [("p", (1, 1)), ("q", (0, 0))], FIG8_DIFF + [("p", "q", "1")],
        [("a", "a", "1"), ("a", "x", "1"), ("x", "x", "1"), ("x", "d", "1"), ("x", "q", "1"),
         ("b", "c", "1"), ("c", "b", "1"), ("d", "d", "1"), ("p", "p", "1"), ("q", "q", "1")],
        {"description": "figure-eight plus an acyclic pair, involution perturbed through the pair"},
    )


def s3() -> IotaComplex:
    base = FreeComplex.build(U_RING, [("1", (0,))])
    return IotaComplex(base, base.identity())


def s1xs2() -> FreeComplex:
    return FreeComplex.build(U_RING, [("T+", ("1/2",)), ("T-", ("-1/2",))])


def _uq(c: FreeComplex) -> FreeComplex:
    return c.convert(UQ_RING)


def s2xs2_boxes() -> tuple[Hyperbox, Hyperbox]:
    S = _uq(s3().base)
    T = _uq(s1xs2())
    f1 = Matrix.from_entries(UQ_RING, 1, 2, [(0, 1, UQ_RING.one())])
    d1 = Matrix.from_entries(UQ_RING, 1, 2, [(0, 0, UQ_RING.mono(0, q=1))])
    w1 = Hyperbox((1, 1), {(0, 0): S, (0, 1): S, (1, 0): T, (1, 1): T},
                  {((0, 0), (1, 0)): f1, ((0, 1), (1, 1)): f1, ((0, 0), (1, 1)): d1},
                  {"description": "1-handle square: F = (1 -> T-), Q h = (1 -> Q T+)"})
    f2 = Matrix.from_entries(UQ_RING, 2, 1, [(0, 0, UQ_RING.one())])
    w2 = Hyperbox((1, 1), {(0, 0): T, (0, 1): T, (1, 0): S, (1, 1): S},
                  {((0, 0), (1, 0)): f2, ((0, 1), (1, 1)): f2},
                  {"description": "3-handle square: F = (T+ -> 1), no diagonal"})
    return w1, w2


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    knots = {"unknot": unknot(), "trefoil": trefoil(), "figure_eight": figure_eight(),
             "figure_eight_stabilized": figure_eight_stabilized()}
    for name, K in knots.items():
        rep = validate_iota_k(K)
        assert rep.ok, (name, rep.lines())
        save(K, OUT / f"{name}.knot")
    link = split_union([figure_eight(), trefoil()])
    link = IotaKComplex(link.base, link.iota_k, None, {"description": "split union of figure-eight and trefoil"})
    assert validate_iota_k(link).ok
    save(link, OUT / "fig8_trefoil_split.knot")
    C = s3()
    assert validate_iota_complex(C).ok
    save(C, OUT / "s3.iota")
    save(s1xs2(), OUT / "s1xs2.complex")
    w1, w2 = s2xs2_boxes()
    assert validate_hyperbox(w1).ok and validate_hyperbox(w2).ok
    save(w1, OUT / "s2xs2_w1.box")
    save(w2, OUT / "s2xs2_w2.box")
    X = build_involutive_cone(trefoil(), 2)
    assert validate_cone(X).ok
    sec = X.sector_iota([1])
    assert validate_iota_complex(sec).ok
    save(sec, OUT / "trefoil_surgery2.iota")
    return 0


if __name__ == "__main__":
    sys.exit(main())
