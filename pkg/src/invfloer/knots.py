"""iota_K- and iota_L-complexes over F2[u, v] and the link rings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complex import (ChainMap, ComplexError, FreeComplex, Generator, homotopy_solve, phi,
                      psi, tensor_maps, tensor_product, validate_complex)
from .linalg import Matrix
from .report import Report
from .ring import Coefficient, Monomial, Ring


@dataclass(frozen=True)
class IotaKComplex:
    base: FreeComplex
    iota_k: ChainMap
    flip_maps: tuple | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not self.base.ring.two_variable:
            raise ComplexError("an iota_K-complex lives over a two-variable ring")
        if not (self.iota_k.source.structurally_equal(self.base)
                and self.iota_k.target.structurally_equal(self.base)):
            raise ComplexError("iota_K must be an endomorphism of the base complex")

    @property
    def components(self) -> int:
        return self.base.ring.components

    def alexander(self, name: str) -> tuple[Fraction, ...]:
        return self.base.alexander(self.base.index[name])

    def max_abs_alexander(self) -> int:
        vals = [abs(a) for i in range(self.base.n) for a in self.base.alexander(i)]
        return int(max(vals, default=0))


def link_square_target(C: IotaKComplex | FreeComplex) -> ChainMap:
    """(id + Phi_l Psi_l) o ... o (id + Phi_1 Psi_1)."""
    base = C.base if isinstance(C, IotaKComplex) else C
    if not base.ring.two_variable:
        raise ComplexError("link_square_target needs a two-variable mode")
    out = base.identity()
    for i in range(1, base.ring.components + 1):
        step = base.identity() + phi(base, i).compose(psi(base, i))
        out = step.compose(out)
    return out


def validate_iota_k(C: IotaKComplex) -> Report:
    rep = Report("iota_K-complex" if C.base.ring.kind == "UV" else "iota_L-complex")
    rep.extend(validate_complex(C.base), "base: ")
    it = C.iota_k
    rep.add("iota_K is skew-equivariant", it.skew)
    grading_ok = all(x == 0 for x in it.degree) and it.is_homogeneous()
    rep.add("iota_K exchanges (gr_u, gr_v)", grading_ok)
    chain_ok = it.is_chain_map()
    rep.add("iota_K chain map", chain_ok)
    target = link_square_target(C)
    sq = it.compose(it)
    h = homotopy_solve(sq, target) if (grading_ok and chain_ok and it.skew) else None
    exact = sq.matrix == target.matrix
    label = "iota_K^2 ~ id + Phi Psi" if C.base.ring.kind == "UV" else "iota_L^2 ~ prod(id + Phi_i Psi_i)"
    detail = "exactly" if exact else ("" if h is None else f"homotopy with {h.matrix.nnz()} entries")
    rep.add(label, h is not None, detail)
    rep.data.update(homotopy=h, exact=exact)
    return rep


def mixed_commutator(base: FreeComplex, i: int, j: int) -> ChainMap:
    """Phi_i Psi_j + Psi_j Phi_i."""
    P, S = phi(base, i), psi(base, j)
    return P.compose(S) + S.compose(P)


# -- building link complexes from knots --------------------------------------------

def _embed_coeff(c: Coefficient, ring: Ring, comp: int) -> Coefficient:
    out = []
    for m in c.terms:
        exps = [0] * ring.nvars
        exps[2 * comp], exps[2 * comp + 1] = m.exps
        out.append(Monomial(tuple(exps), 0))
    return Coefficient(ring, out)


def embed_knot(C: FreeComplex, ring: Ring, comp: int) -> FreeComplex:
    """View a UV-mode complex as a link-mode complex supported on one component."""
    gens = []
    for g in C.generators:
        alex = [Fraction(0)] * ring.components
        alex[comp] = (g.gr[0] - g.gr[1]) / 2
        gens.append(Generator(g.name, (g.gr[0], g.gr[1], *alex)))
    return FreeComplex(ring, gens, C.d.map_entries(lambda c: _embed_coeff(c, ring, comp), ring))


def _embed_map(f: ChainMap, src: FreeComplex, tgt: FreeComplex, comp: int) -> ChainMap:
    ring = src.ring
    mat = f.matrix.map_entries(lambda c: _embed_coeff(c, ring, comp), ring)
    deg = [Fraction(0)] * ring.grading_length
    deg[0], deg[1] = f.degree[0], f.degree[1]
    deg[2 + comp] = (f.degree[0] - f.degree[1]) / 2
    return ChainMap(src, tgt, mat, deg, f.skew)


def split_union(knots: list[IotaKComplex]) -> IotaKComplex:
    """Tensor product of knot complexes, one link component per factor."""
    ring = Ring("link", len(knots))
    total = None
    total_iota = None
    for comp, K in enumerate(knots):
        if K.base.ring.kind != "UV":
            raise ComplexError("split_union takes knot complexes")
        e = embed_knot(K.base, ring, comp)
        ei = _embed_map(K.iota_k, e, e, comp)
        if total is None:
            total, total_iota = e, ei
        else:
            new = tensor_product(total, e)
            total_iota = tensor_maps(total_iota, ei, new, new)
            total = new
    return IotaKComplex(total, total_iota, metadata={"construction": "split union"})


def permuted(C: IotaKComplex, order: list[int]) -> IotaKComplex:
    base = C.base.permuted(order)
    mat = C.iota_k.matrix.restrict(order, order)
    return IotaKComplex(base, ChainMap(base, base, mat, C.iota_k.degree, True), C.flip_maps, C.metadata)


def collapse_to_u(C: IotaKComplex):
    """The Alexander-zero diagonal slice with the induced involution.

    Returns ``(IotaComplex, Report)``; the iota-complex axioms are checked.
    """
    from .involutive import IotaComplex, validate_iota_complex
    from .surgery import extract_flagged, induced_matrix

    if C.base.ring.kind != "UV":
        raise ComplexError("collapse_to_u needs a knot complex")
    A0 = extract_flagged(C, "A", 0)
    cx = A0.complex
    iota = ChainMap(cx, cx, induced_matrix(C.iota_k.matrix, True, A0, A0, 0))
    ic = IotaComplex(cx, iota)
    return ic, validate_iota_complex(ic)
