"""iota-complexes, enhanced morphisms and the involutive cone CFI."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complex import (ChainMap, ComplexError, FreeComplex, homotopy_solve, phi,
                      validate_complex)
from .homology import localized_rank
from .hypercube import Hyperbox, compress, stack, validate_hyperbox
from .linalg import Matrix
from .report import Report
from .ring import U_RING, UQ_RING


@dataclass(frozen=True)
class IotaComplex:
    base: FreeComplex
    iota: ChainMap

    def __post_init__(self) -> None:
        if self.iota.source is not self.base and not self.iota.source.structurally_equal(self.base):
            raise ComplexError("iota must be an endomorphism of the base complex")
        if not self.iota.target.structurally_equal(self.base):
            raise ComplexError("iota must be an endomorphism of the base complex")

    @property
    def n(self) -> int:
        return self.base.n


def validate_iota_complex(C: IotaComplex) -> Report:
    rep = Report("iota-complex")
    base = C.base
    ok1 = base.ring.kind == "U" and validate_complex(base).ok
    rep.add("axiom 1: free graded F[U]-complex, U of degree -2", ok1,
            "" if ok1 else f"mode {base.ring} or invalid differential")
    towers = localized_rank(base) if base.ring.kind == "U" else -1
    rep.add("axiom 2: one free tower after inverting U", towers == 1, f"{towers} towers")
    iota = C.iota
    grading_ok = (not iota.skew and all(x == 0 for x in iota.degree) and iota.is_homogeneous())
    rep.add("axiom 3: iota grading preserving", grading_ok)
    chain_ok = iota.is_chain_map()
    rep.add("axiom 3: iota chain map", chain_ok)
    h = homotopy_solve(iota.compose(iota), base.identity()) if grading_ok and chain_ok else None
    rep.add("axiom 3: iota^2 ~ id", h is not None,
            "" if h is None else ("exact" if h.is_zero() else f"homotopy with {h.matrix.nnz()} entries"))
    rep.data["iota_squared_homotopy"] = h
    return rep


def _hdeg(F: ChainMap) -> tuple[Fraction, ...]:
    return tuple(x + 1 for x in F.degree)


@dataclass(frozen=True)
class EnhancedMorphism:
    """A pair (F, h) with h one degree above F."""

    F: ChainMap
    h: ChainMap
    source: IotaComplex
    target: IotaComplex

    def __post_init__(self) -> None:
        for m in (self.F, self.h):
            if m.matrix.shape != (self.source.n, self.target.n):
                raise ComplexError("enhanced morphism does not fit its source and target")
        if self.h.degree != _hdeg(self.F) and not self.h.is_zero():
            raise ComplexError("h must have degree one above F")

    @classmethod
    def of(cls, F: ChainMap, h: ChainMap | None, source: IotaComplex, target: IotaComplex) -> "EnhancedMorphism":
        if h is None:
            h = ChainMap(source.base, target.base, Matrix.zero(U_RING, source.n, target.n), _hdeg(F))
        elif h.is_zero() and h.degree != _hdeg(F):
            h = ChainMap(source.base, target.base, h.matrix, _hdeg(F))
        return cls(F, h, source, target)

    @classmethod
    def identity(cls, C: IotaComplex) -> "EnhancedMorphism":
        return cls.of(C.base.identity(), None, C, C)

    def is_zero(self) -> bool:
        return self.F.is_zero() and self.h.is_zero()

    def __add__(self, other: "EnhancedMorphism") -> "EnhancedMorphism":
        return EnhancedMorphism(self.F + other.F, self.h + other.h, self.source, self.target)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnhancedMorphism):
            return NotImplemented
        return self.F.matrix == other.F.matrix and self.h.matrix == other.h.matrix

    def __hash__(self) -> int:
        return hash((self.F.matrix, self.h.matrix))


def mor_differential(m: EnhancedMorphism) -> EnhancedMorphism:
    """(F, h) -> (d'F + F d, F iota + iota' F + d'h + h d)."""
    S, T = m.source, m.target
    F, h = m.F, m.h
    dF = F.commutator()
    second = (F.matrix.compose(S.iota.matrix) + T.iota.matrix.compose(F.matrix) + h.commutator())
    deg = tuple(x - 1 for x in F.degree)
    return EnhancedMorphism(ChainMap(S.base, T.base, dF, deg), ChainMap(S.base, T.base, second, F.degree), S, T)


def is_enhanced_homomorphism(m: EnhancedMorphism) -> bool:
    return mor_differential(m).is_zero()


def compose_enhanced(m2: EnhancedMorphism, m1: EnhancedMorphism, reading: str = "standard") -> EnhancedMorphism:
    """Composite of m2 after m1.

    ``standard``: (F,h) o (F',h') = (F F', F h' + h F').
    ``verbatim``: (F,h) o (F',h') = (F F', F' h + h' F); this only makes sense
    when every map is an endomorphism of one complex.
    """
    if not m1.target.base.structurally_equal(m2.source.base):
        raise ComplexError("composition shape mismatch")
    F, h = m2.F, m2.h
    F1, h1 = m1.F, m1.h
    FF = F.compose(F1)
    if reading == "standard":
        hh = F.compose(h1) + h.compose(F1)
    elif reading == "verbatim":
        same = (m1.source.base.structurally_equal(m1.target.base)
                and m2.source.base.structurally_equal(m2.target.base))
        if not same:
            raise ComplexError("the verbatim reading is only defined for endomorphisms")
        a = F1.compose(h)
        b = h1.compose(F)
        hh = ChainMap(m1.source.base, m2.target.base, a.matrix + b.matrix, a.degree)
    else:
        raise ValueError(f"unknown reading {reading!r}")
    hh = ChainMap(m1.source.base, m2.target.base, hh.matrix, _hdeg(FF))
    return EnhancedMorphism(FF, hh, m1.source, m2.target)


# -- CFI ----------------------------------------------------------------------------

def build_cfi(C: IotaComplex, check: bool = True) -> FreeComplex:
    """The cone of Q(1 + iota) as a complex over F[U,Q]/Q^2."""
    if check:
        rep = validate_iota_complex(C)
        if not rep.ok:
            raise ComplexError("build_cfi needs a valid iota-complex: " + "; ".join(
                c.name for c in rep.failures()))
    base = C.base.convert(UQ_RING)
    q = UQ_RING.mono(0, q=1)
    one_plus = Matrix.identity(U_RING, C.n) + C.iota.matrix
    d = base.d + one_plus.convert(UQ_RING).scale(q)
    return FreeComplex(UQ_RING, base.generators, d)


def q_translation(m: EnhancedMorphism, source_cfi: FreeComplex | None = None,
                  target_cfi: FreeComplex | None = None) -> ChainMap:
    """The F[U,Q]/Q^2-map F + Q h between the cones."""
    S = source_cfi or build_cfi(m.source, check=False)
    T = target_cfi or build_cfi(m.target, check=False)
    q = UQ_RING.mono(0, q=1)
    mat = m.F.matrix.convert(UQ_RING) + m.h.matrix.convert(UQ_RING).scale(q)
    return ChainMap(S, T, mat, m.F.degree)


def twist_automorphism(C: IotaComplex, check: bool = True) -> ChainMap:
    """Id + Q Phi on CFI(C)."""
    cfi = build_cfi(C, check=check)
    q = UQ_RING.mono(0, q=1)
    mat = Matrix.identity(UQ_RING, C.n) + phi(C.base).matrix.convert(UQ_RING).scale(q)
    return ChainMap(cfi, cfi, mat)


def twist_report(C: IotaComplex) -> Report:
    rep = Report("twist")
    t = twist_automorphism(C)
    cfi = t.source
    rep.add("Id+Q.Phi is a chain map of CFI", t.is_chain_map())
    rep.add("(Id+Q.Phi)^2 = Id", t.compose(t).matrix == Matrix.identity(UQ_RING, C.n))
    h = homotopy_solve(t, cfi.identity())
    rep.data["homotopic_to_identity"] = h is not None
    rep.data["homotopy"] = h
    rep.data["map"] = t
    return rep


# -- squares and cubes ---------------------------------------------------------------

def _q_edge(C: IotaComplex) -> Matrix:
    q = UQ_RING.mono(0, q=1)
    return (Matrix.identity(U_RING, C.n) + C.iota.matrix).convert(UQ_RING).scale(q)


def _uq(m: Matrix) -> Matrix:
    return m.convert(UQ_RING)


def enhanced_square(m: EnhancedMorphism) -> Hyperbox:
    """The 2-cube with F along axis 0 and Q(1+iota) along axis 1."""
    A = m.source.base.convert(UQ_RING)
    B = m.target.base.convert(UQ_RING)
    q = UQ_RING.mono(0, q=1)
    cells = {(0, 0): A, (0, 1): A, (1, 0): B, (1, 1): B}
    arrows = {
        ((0, 0), (1, 0)): _uq(m.F.matrix),
        ((0, 1), (1, 1)): _uq(m.F.matrix),
        ((0, 0), (0, 1)): _q_edge(m.source),
        ((1, 0), (1, 1)): _q_edge(m.target),
        ((0, 0), (1, 1)): _uq(m.h.matrix).scale(q),
    }
    return Hyperbox((1, 1), cells, arrows)


def cube_to_cfi_map(H: Hyperbox) -> ChainMap:
    """Read a square (map along axis 0, involution along axis 1) as F + Q h."""
    if H.size != (1, 1) or H.ring != UQ_RING:
        raise ComplexError("need a 1x1 square over F[U,Q]/Q^2")
    A, B = H.cells[(0, 0)], H.cells[(1, 0)]
    S = FreeComplex(UQ_RING, A.generators, A.d + H.arrow((0, 0), (0, 1)))
    T = FreeComplex(UQ_RING, B.generators, B.d + H.arrow((1, 0), (1, 1)))
    mat = H.arrow((0, 0), (1, 0)) + H.arrow((0, 0), (1, 1))
    return ChainMap(S, T, mat)


def enhanced_square_to_cube(F: EnhancedMorphism, G: EnhancedMorphism, H: EnhancedMorphism,
                            I: EnhancedMorphism, J: EnhancedMorphism) -> tuple[Hyperbox, Report]:
    """Assemble the 3-cube for the square A -G-> B -F-> D, A -I-> C -H-> D with
    diagonal (J, j): A -> D, and compare cube validity with the enhanced
    relation (F,f)(G,g) + (H,h)(I,i) = d_Mor(J,j)."""
    A, B, C, D = G.source, G.target, I.target, F.target
    if not (F.source.base.structurally_equal(B.base) and H.source.base.structurally_equal(C.base)
            and H.target.base.structurally_equal(D.base) and I.source.base.structurally_equal(A.base)
            and J.source.base.structurally_equal(A.base) and J.target.base.structurally_equal(D.base)):
        raise ComplexError("square shape mismatch")
    q = UQ_RING.mono(0, q=1)
    corners = {(0, 0): A, (1, 0): B, (0, 1): C, (1, 1): D}
    cells = {}
    for (x, y), X in corners.items():
        base = X.base.convert(UQ_RING)
        cells[(x, y, 0)] = base
        cells[(x, y, 1)] = base
    arrows = {}
    for z in (0, 1):
        arrows[((0, 0, z), (1, 0, z))] = _uq(G.F.matrix)
        arrows[((0, 1, z), (1, 1, z))] = _uq(H.F.matrix)
        arrows[((0, 0, z), (0, 1, z))] = _uq(I.F.matrix)
        arrows[((1, 0, z), (1, 1, z))] = _uq(F.F.matrix)
        arrows[((0, 0, z), (1, 1, z))] = _uq(J.F.matrix)
    for (x, y), X in corners.items():
        arrows[((x, y, 0), (x, y, 1))] = _q_edge(X)
    arrows[((0, 0, 0), (1, 0, 1))] = _uq(G.h.matrix).scale(q)
    arrows[((0, 1, 0), (1, 1, 1))] = _uq(H.h.matrix).scale(q)
    arrows[((0, 0, 0), (0, 1, 1))] = _uq(I.h.matrix).scale(q)
    arrows[((1, 0, 0), (1, 1, 1))] = _uq(F.h.matrix).scale(q)
    arrows[((0, 0, 0), (1, 1, 1))] = _uq(J.h.matrix).scale(q)
    cube = Hyperbox((1, 1, 1), cells, arrows)

    rep = Report("enhanced square")
    cube_rep = validate_hyperbox(cube)
    cube_ok = cube_rep.ok
    homs = all(is_enhanced_homomorphism(m) for m in (F, G, H, I))
    lhs = compose_enhanced(F, G) + compose_enhanced(H, I)
    rhs = mor_differential(J)
    rel = lhs.F.matrix == rhs.F.matrix and lhs.h.matrix == rhs.h.matrix
    rep.add("cube relations hold iff the square is an enhanced relation", cube_ok == (homs and rel),
            f"cube {'valid' if cube_ok else 'invalid'}, homomorphisms {homs}, relation {rel}")
    rep.data.update(cube_valid=cube_ok, homomorphisms=homs, relation=rel,
                    violations=cube_rep.data["violations"])
    return cube, rep


def compose_squares(first: Hyperbox, second: Hyperbox,
                    axis_order: list[int] | None = None) -> tuple[Hyperbox, ChainMap]:
    """Stack two CFI squares along the map axis, compress, and read off F + Q h."""
    box = stack(first, second, 0)
    cube = compress(box, axis_order)
    return cube, cube_to_cfi_map(cube)
