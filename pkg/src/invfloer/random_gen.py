"""Seeded random generators for property tests and acceptance runs.

Every generator takes a ``random.Random`` and returns objects that are valid
by construction; tests then check the engine against independent oracles.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .complex import (ChainMap, FreeComplex, Generator, chain_map_space, homogeneous_maps,
                      homotopy_solve, tensor_maps, tensor_product)
from .homology import hat_induced_rank
from .hypercube import Hyperbox, leq, one_dimensional, points_between
from .involutive import EnhancedMorphism, IotaComplex
from .linalg import Matrix
from .ring import U_RING


def _combo(rng: random.Random, basis: list[ChainMap],
           density: float = 0.5) -> Matrix | None:
    if not basis:
        return None
    mat = Matrix.zero(basis[0].ring, basis[0].source.n, basis[0].target.n)
    for b in basis:
        if rng.random() < density:
            mat = mat + b.matrix
    return mat


def _elementary_conjugate(rng: random.Random, c: FreeComplex, steps: int) -> tuple[FreeComplex, Matrix]:
    """Change basis by ``steps`` moves x_i -> x_i + U^k x_j; returns (C', P) with P: C' -> C a chain iso."""
    n = c.n
    P = Matrix.identity(U_RING, n)
    d = c.d
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        diff = c.gr(j)[0] - c.gr(i)[0]
        if diff < 0 or diff.denominator != 1 or diff % 2:
            continue
        E = Matrix.from_entries(U_RING, n, n, [(i, i, U_RING.one()), (j, j, U_RING.one())]
                                + [(k, k, U_RING.one()) for k in range(n) if k not in (i, j)]
                                + [(i, j, U_RING.mono(int(diff) // 2))])
        d = E.compose(d).compose(E)
        P = P.compose(E)
    return FreeComplex(U_RING, c.generators, d), P


def random_complex(rng: random.Random, max_gens: int = 12, towers: int | None = None,
                   max_power: int = 3, grading_span: int = 4, shuffle_steps: int = 20) -> FreeComplex:
    """A homogeneous F[U]-complex: a random sum of towers and U^k-pairs, then scrambled."""
    if towers is None:
        towers = rng.randint(0, min(3, max_gens))
    gens: list[Generator] = []
    entries = []
    for _ in range(towers):
        gens.append(Generator(f"g{len(gens)}", (Fraction(rng.randint(-grading_span, grading_span)),)))
    while len(gens) + 2 <= max_gens and rng.random() < 0.85:
        k = rng.randint(0, max_power)
        g = rng.randint(-grading_span, grading_span)
        x = len(gens)
        gens.append(Generator(f"g{x}", (Fraction(g),)))
        gens.append(Generator(f"g{x + 1}", (Fraction(g - 1 + 2 * k),)))
        entries.append((x, x + 1, U_RING.mono(k)))
    if not gens:
        gens.append(Generator("g0", (Fraction(rng.randint(-grading_span, grading_span)),)))
    order = list(range(len(gens)))
    rng.shuffle(order)
    base = FreeComplex(U_RING, gens, Matrix.from_entries(U_RING, len(gens), len(gens), entries))
    base = base.permuted(order)
    base = FreeComplex(U_RING, [Generator(f"g{i}", g.gr) for i, g in enumerate(base.generators)], base.d)
    scrambled, _ = _elementary_conjugate(rng, base, shuffle_steps)
    return scrambled


def random_chain_map(rng: random.Random, source: FreeComplex, target: FreeComplex,
                     degree=(0,)) -> ChainMap:
    basis = chain_map_space(source, target, degree)
    mat = _combo(rng, basis)
    if mat is None:
        return ChainMap(source, target, Matrix.zero(source.ring, source.n, target.n), degree)
    return ChainMap(source, target, mat, degree)


def random_map(rng: random.Random, source: FreeComplex, target: FreeComplex, degree,
               density: float = 0.4) -> ChainMap:
    """A random homogeneous module map of the degree (not necessarily a chain map)."""
    basis = homogeneous_maps(source, target, degree)
    mat = _combo(rng, basis, density=density)
    if mat is None:
        return ChainMap(source, target, Matrix.zero(source.ring, source.n, target.n), degree)
    return ChainMap(source, target, mat, degree)


def null_homotopic(rng: random.Random, source: FreeComplex, target: FreeComplex, degree=(0,)) -> ChainMap:
    """d H + H d for a random H one degree up."""
    hdeg = tuple(Fraction(x) - Fraction(y) for x, y in zip(degree, source.ring.differential_degree))
    H = random_map(rng, source, target, hdeg)
    return ChainMap(source, target, H.commutator(), degree)


def homotopic_pair(rng: random.Random, max_gens: int = 8) -> tuple[ChainMap, ChainMap]:
    src = random_complex(rng, max_gens)
    tgt, _ = _elementary_conjugate(rng, src, 10)
    f = random_chain_map(rng, src, tgt)
    g = f + null_homotopic(rng, src, tgt)
    return f, g


def non_homotopic_pair(rng: random.Random, max_gens: int = 8, tries: int = 50) -> tuple[ChainMap, ChainMap]:
    """f, g whose difference acts nontrivially on H(C/U), so no homotopy can exist."""
    for _ in range(tries):
        src = random_complex(rng, max_gens, towers=rng.randint(1, 2))
        tgt, _ = _elementary_conjugate(rng, src, 10)
        f = random_chain_map(rng, src, tgt)
        e = random_chain_map(rng, src, tgt)
        if hat_induced_rank(e)[0] > 0:
            return f, f + e
    raise RuntimeError("could not build a non-homotopic pair")


# -- iota-complexes and enhanced morphisms ----------------------------------------

def random_iota_complex(rng: random.Random, max_gens: int = 7) -> IotaComplex:
    """A one-tower complex with iota = id + (dK + Kd)."""
    base = random_complex(rng, max_gens, towers=1)
    iota = base.identity() + null_homotopic(rng, base, base)
    return IotaComplex(base, iota)


def random_enhanced(rng: random.Random, source: IotaComplex, target: IotaComplex,
                    degree: int | None = None) -> EnhancedMorphism:
    """An arbitrary pair (F, h) with h one degree above F; neither need be closed."""
    if degree is None:
        degree = rng.randint(-2, 1)
    F = random_map(rng, source.base, target.base, (degree,))
    h = random_map(rng, source.base, target.base, (degree + 1,))
    return EnhancedMorphism.of(F, h, source, target)


def random_enhanced_homomorphism(rng: random.Random, source: IotaComplex,
                                 target: IotaComplex) -> EnhancedMorphism | None:
    """A chain map F with a solved h: d h + h d = F iota + iota' F; None if unsolvable."""
    F = random_chain_map(rng, source.base, target.base)
    lhs = F.compose(source.iota)
    rhs = target.iota.compose(F)
    h = homotopy_solve(lhs, rhs)
    if h is None:
        return None
    return EnhancedMorphism.of(F, h, source, target)


# -- hyperboxes --------------------------------------------------------------------

def random_line(rng: random.Random, length: int, cell_gens: int) -> Hyperbox:
    """A 1-dimensional box: complexes joined by random degree-0 chain maps."""
    cells = []
    first = random_complex(rng, cell_gens, towers=rng.randint(0, 1), grading_span=2, shuffle_steps=4)
    cells.append(first)
    for _ in range(length):
        if rng.random() < 0.5:
            nxt, _ = _elementary_conjugate(rng, cells[-1], 4)
        else:
            nxt = random_complex(rng, cell_gens, towers=rng.randint(0, 1), grading_span=2, shuffle_steps=4)
        cells.append(nxt)
    maps = [random_chain_map(rng, a, b).matrix for a, b in zip(cells, cells[1:])]
    return one_dimensional(cells, maps)


def _tensor_boxes(A: Hyperbox, B: Hyperbox) -> Hyperbox:
    cells = {}
    prods = {}
    for p in A.points():
        for q in B.points():
            cells[p + q] = tensor_product(A.cells[p], B.cells[q], sep=".")
            prods[(p, q)] = cells[p + q]
    arrows = {}
    for (a, b), m in A.arrows.items():
        for q in B.points():
            f = ChainMap(A.cells[a], A.cells[b], m)
            arrows[(a + q, b + q)] = tensor_maps(f, B.cells[q].identity(), prods[(a, q)], prods[(b, q)]).matrix
    for (a, b), m in B.arrows.items():
        for p in A.points():
            g = ChainMap(B.cells[a], B.cells[b], m)
            arrows[(p + a, p + b)] = tensor_maps(A.cells[p].identity(), g, prods[(p, a)], prods[(p, b)]).matrix
    return Hyperbox(A.size + B.size, cells, arrows)


def conjugate_hyperbox(H: Hyperbox, a: tuple, b: tuple, N: Matrix) -> Hyperbox:
    """Conjugate by 1 + N with N: cell a -> cell b (a < b in one unit cube).

    Inside each unit cube the total differential becomes (1+N) D (1+N), so
    the structure relation survives.
    """
    arrows = dict(H.arrows)
    for p, q in H.admissible_pairs():
        add = None
        if q == b and leq(p, a):
            m = H.arrow(p, a)
            if not m.is_zero():
                add = N.compose(m)
        if p == a and leq(b, q):
            m = H.arrow(b, q)
            if not m.is_zero():
                t = m.compose(N)
                add = t if add is None else add + t
        if add is not None:
            if p == q:
                raise ValueError("conjugation cannot touch a cell differential")
            arrows[(p, q)] = H.arrow(p, q) + add if (p, q) in arrows else add
    return Hyperbox(H.size, H.cells, arrows, H.metadata)


def random_hyperbox(rng: random.Random, max_dim: int = 3, max_side: int = 3, max_cell_gens: int = 8,
                    conjugations: int = 6) -> Hyperbox:
    """A valid hyperbox: tensor of random 1-dimensional boxes, then conjugated inside unit cubes."""
    dim = rng.randint(1, max_dim)
    size = [rng.randint(1, max_side) for _ in range(dim)]
    per_axis = {1: [max_cell_gens], 2: [2, 4], 3: [2, 2, 2]}[dim]
    rng.shuffle(per_axis)
    box = None
    for ax in range(dim):
        line = random_line(rng, size[ax], per_axis[ax])
        box = line if box is None else _tensor_boxes(box, line)
    for _ in range(conjugations):
        lo = tuple(rng.randint(0, s - 1) for s in box.size)
        step = tuple(rng.randint(0, 1) for _ in box.size)
        if not any(step):
            continue
        hi = tuple(x + y for x, y in zip(lo, step))
        # a: the lower corner of the move, b: the upper one, both in the unit cube [lo, hi]
        corners = list(points_between(lo, hi))
        a, b = sorted(rng.sample(corners, 2))
        if not leq(a, b):
            continue
        length = sum(y - x for x, y in zip(a, b))
        basis = homogeneous_maps(box.cells[a], box.cells[b], (length,))
        N = _combo(rng, basis, density=0.3)
        if N is None or N.is_zero():
            continue
        box = conjugate_hyperbox(box, a, b, N)
    box.metadata["generator"] = "tensor of lines, conjugated"
    return box
