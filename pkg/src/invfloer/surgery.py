"""The surgery mapping cone X_m(K), its involutive refinement and the map J."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .complex import (ChainMap, ComplexError, FreeComplex, Generator, chain_map_space,
                      find_homotopy_inverse, homotopy_solve, validate_complex)
from .homology import GradedHomology, hat_induced_rank, homology, localized_q_action, localized_rank
from .involutive import IotaComplex, build_cfi
from .knots import IotaKComplex
from .linalg import Matrix
from .report import Report
from .ring import U_RING, UQ_RING, Coefficient, Monomial


class SurgeryError(ValueError):
    pass


@dataclass(frozen=True)
class FlaggedSubcomplex:
    kind: str            # "A", "B" or "Bt" (B-tilde)
    s: int
    offsets: tuple[tuple[int, int], ...]
    complex: FreeComplex

    def maslov(self, i: int) -> Fraction:
        return self.complex.gr(i)[0]


def _int_alexander(K: IotaKComplex, i: int) -> int:
    (a,) = K.base.alexander(i)
    if a.denominator != 1:
        raise SurgeryError(f"generator {K.base.generators[i].name} has non-integral Alexander grading")
    return int(a)


def flagged_offsets(K: IotaKComplex, kind: str, s: int) -> list[tuple[int, int]]:
    out = []
    for i in range(K.base.n):
        A = _int_alexander(K, i)
        if kind == "A":
            a = max(0, A - s)
            out.append((a, a - A))
        elif kind == "B":
            out.append((0, -A))
        elif kind == "Bt":
            out.append((A - s, -s))
        else:
            raise SurgeryError(f"unknown flagged kind {kind!r}")
    return out


def induced_matrix(mat: Matrix, skew: bool, src: FlaggedSubcomplex, tgt: FlaggedSubcomplex, power: int) -> Matrix:
    """F[U]-matrix induced on flagged bases by a map of knot complexes, times U^power."""
    entries = []
    for x, y, c in mat.entries():
        ix, jx = src.offsets[x]
        iy, jy = tgt.offsets[y]
        acc = U_RING.zero()
        for m in c.terms:
            a, b = m.exps
            eu, ev = (jx + a, ix + b) if skew else (ix + a, jx + b)
            ku, kv = eu + power - iy, ev + power - jy
            if ku != kv or ku < 0:
                raise SurgeryError(
                    f"induced entry {src.complex.generators[x].name}->{tgt.complex.generators[y].name}"
                    f" has exponents ({ku}, {kv})")
            acc = acc + U_RING.mono(ku)
        if acc:
            entries.append((x, y, acc))
    return Matrix.from_entries(U_RING, src.complex.n, tgt.complex.n, entries)


def extract_flagged(K: IotaKComplex, kind: str, s: int) -> FlaggedSubcomplex:
    if K.base.ring.kind != "UV":
        raise SurgeryError("flagged subcomplexes need a knot complex")
    offs = flagged_offsets(K, kind, s)
    gens = []
    for (i, j), g in zip(offs, K.base.generators):
        gens.append(Generator(g.name, (g.gr[0] - 2 * i,)))
    proto = FlaggedSubcomplex(kind, s, tuple(offs), FreeComplex(U_RING, gens))
    d = induced_matrix(K.base.d, False, proto, proto, 0)
    cx = FreeComplex(U_RING, gens, d)
    if not validate_complex(cx).ok:
        raise SurgeryError(f"induced differential on {kind}_{s} is not a valid complex")
    return FlaggedSubcomplex(kind, s, tuple(offs), cx)


def v_map(K: IotaKComplex, s: int) -> Matrix:
    """Inclusion A_s -> B_s; diagonal U^max(0, A - s)."""
    n = K.base.n
    return induced_matrix(Matrix.identity(K.base.ring, n), False, extract_flagged(K, "A", s),
                          extract_flagged(K, "B", s), 0)


def vt_map(K: IotaKComplex, s: int) -> Matrix:
    """Inclusion A_s -> B-tilde_s; diagonal U^max(0, s - A)."""
    n = K.base.n
    return induced_matrix(Matrix.identity(K.base.ring, n), False, extract_flagged(K, "A", s),
                          extract_flagged(K, "Bt", s), 0)


# -- the flip ------------------------------------------------------------------------

def _flip_complexes(K: IotaKComplex) -> tuple[FreeComplex, FreeComplex]:
    return extract_flagged(K, "Bt", 0).complex, extract_flagged(K, "B", 0).complex


def check_flip(K: IotaKComplex, F: ChainMap) -> Report:
    rep = Report("flip")
    rep.add("flip is a chain map", F.is_chain_map())
    rep.add("flip is homogeneous", F.is_homogeneous())
    inv = find_homotopy_inverse(F) if rep.ok else None
    rep.add("flip is a homotopy equivalence", inv is not None)
    rep.data["inverse"] = inv
    return rep


def build_flip(K: IotaKComplex, m: int | None = None, seed: int = 0, max_tries: int = 4096) -> ChainMap:
    """Homotopy equivalence B-tilde_s -> B_{s+m} (matrices do not depend on s or m).

    Uses the knot's supplied flip if present, otherwise searches the space of
    degree-0 chain maps for one that the homotopy-inverse solver certifies.
    """
    src, tgt = _flip_complexes(K)
    if K.flip_maps is not None:
        F = ChainMap.from_entries(src, tgt, K.flip_maps)
        rep = check_flip(K, F)
        if not rep.ok:
            raise SurgeryError("supplied flip map fails: " + "; ".join(c.name for c in rep.failures()))
        return F
    basis = chain_map_space(src, tgt, (0,))
    k = len(basis)
    if k == 0:
        raise SurgeryError("no degree-0 chain maps between B-tilde and B")

    def combos():
        if k <= 12:
            yield from range(1, 1 << k)
        else:
            rng = random.Random(seed)
            for _ in range(max_tries):
                yield rng.getrandbits(k) or 1

    for bits in combos():
        mat = Matrix.zero(U_RING, src.n, tgt.n)
        for t in range(k):
            if bits >> t & 1:
                mat = mat + basis[t].matrix
        F = ChainMap(src, tgt, mat)
        r, ds, dt = hat_induced_rank(F)
        if not (r == ds == dt):
            continue
        if find_homotopy_inverse(F) is not None:
            return F
    raise SurgeryError("no homotopy equivalence found between B-tilde and B")


def solve_h(K: IotaKComplex, flip: ChainMap) -> tuple[ChainMap, ChainMap, ChainMap]:
    """Return (iota_B piece U^t iota_K : B -> B-tilde, the B-tilde -> B piece, H)."""
    Bt0 = extract_flagged(K, "Bt", 0)
    B0 = extract_flagged(K, "B", 0)
    I1 = ChainMap(Bt0.complex, B0.complex, induced_matrix(K.iota_k.matrix, True, Bt0, B0, 0))
    I2 = ChainMap(B0.complex, Bt0.complex, induced_matrix(K.iota_k.matrix, True, B0, Bt0, 0))
    rhs = I1 + flip.compose(I2).compose(flip)
    H = homotopy_solve(rhs, ChainMap(Bt0.complex, B0.complex, Matrix.zero(U_RING, Bt0.complex.n, B0.complex.n)))
    if H is None:
        raise SurgeryError("the equation [d, H] = U^s iota_K + F U^(s+m) iota_K F has no solution")
    return I2, I1, H


# -- the cone ---------------------------------------------------------------------------

def sigma_b(t: int, m: int) -> Fraction:
    return Fraction(t * (t - m), m)


def sigma_a(s: int, m: int) -> Fraction:
    return sigma_b(s, m) + 1


@dataclass
class SurgeryCone:
    knot: IotaKComplex
    framing: int
    bound: int
    involutive: bool
    complex: FreeComplex
    blocks: dict[tuple[str, int], list[int]]
    iota: ChainMap | None = None
    cfi: FreeComplex | None = None
    flip: ChainMap | None = None
    H: ChainMap | None = None
    pieces: dict = field(default_factory=dict)

    @property
    def a_range(self) -> list[int]:
        return list(range(-self.bound, self.bound + 1))

    @property
    def b_range(self) -> list[int]:
        return list(range(-self.bound + self.framing, self.bound + 1))

    def spinc(self, s: int) -> int:
        return s % abs(self.framing)

    def sector_indices(self, classes) -> list[int]:
        classes = {c % abs(self.framing) for c in classes}
        out = []
        for (kind, s), idx in sorted(self.blocks.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            if self.spinc(s) in classes:
                out += idx
        return sorted(out)

    def self_conjugate_classes(self) -> list[int]:
        m = abs(self.framing)
        return [r for r in range(m) if (-r) % m == r]

    def sector(self, classes, involutive: bool = False) -> FreeComplex:
        idx = self.sector_indices(classes)
        src = self.cfi if involutive else self.complex
        if src is None:
            raise SurgeryError("this cone has no involutive layer")
        return src.sub(idx)

    def sector_iota(self, classes) -> IotaComplex:
        idx = self.sector_indices(classes)
        base = self.complex.sub(idx)
        return IotaComplex(base, ChainMap(base, base, self.iota.matrix.restrict(idx, idx)))

    def homology_by_spinc(self) -> dict[int, GradedHomology]:
        return {r: homology(self.sector([r])) for r in range(abs(self.framing))}


def _assemble(K: IotaKComplex, m: int, b: int, flip: ChainMap, involutive: bool, H: ChainMap | None,
              I2: ChainMap | None):
    names = K.base.names()
    gens: list[Generator] = []
    blocks: dict[tuple[str, int], list[int]] = {}
    flagged: dict[tuple[str, int], FlaggedSubcomplex] = {}
    a_range = list(range(-b, b + 1))
    b_range = list(range(-b + m, b + 1))
    for s in a_range:
        fa = extract_flagged(K, "A", s)
        flagged[("A", s)] = fa
        blocks[("A", s)] = list(range(len(gens), len(gens) + fa.complex.n))
        sig = sigma_a(s, m)
        gens += [Generator(f"A{s}:{nm}", (g.gr[0] + sig,)) for nm, g in zip(names, fa.complex.generators)]
    for t in b_range:
        fb = extract_flagged(K, "B", t)
        flagged[("B", t)] = fb
        blocks[("B", t)] = list(range(len(gens), len(gens) + fb.complex.n))
        sig = sigma_b(t, m)
        gens += [Generator(f"B{t}:{nm}", (g.gr[0] + sig,)) for nm, g in zip(names, fb.complex.generators)]
    n = len(gens)

    def place(mat: Matrix, src, tgt) -> list:
        si, ti = blocks[src], blocks[tgt]
        return [(si[i], ti[j], c) for i, j, c in mat.entries()]

    entries = []
    for key, f in flagged.items():
        entries += place(f.complex.d, key, key)
    pieces: dict = {"v": {}, "h": {}}
    for s in a_range:
        if s in b_range:
            v = v_map(K, s)
            pieces["v"][s] = v
            entries += place(v, ("A", s), ("B", s))
        if s + m in b_range:
            h = flip.matrix.compose(vt_map(K, s))
            pieces["h"][s] = h
            entries += place(h, ("A", s), ("B", s + m))
    cx = FreeComplex(U_RING, gens, Matrix.from_entries(U_RING, n, n, entries))
    cone = SurgeryCone(K, m, b, involutive, cx, blocks, flip=flip, pieces=pieces)
    if not involutive:
        return cone
    ient = []
    pieces.update(iota_A={}, iota_B={}, Hvt={})
    for s in a_range:
        ia = induced_matrix(K.iota_k.matrix, True, flagged[("A", s)], flagged[("A", -s)], s)
        pieces["iota_A"][s] = ia
        ient += place(ia, ("A", s), ("A", -s))
        if -s in b_range:
            hv = H.matrix.compose(vt_map(K, s))
            pieces["Hvt"][s] = hv
            ient += place(hv, ("A", s), ("B", -s))
    iota_b = flip.matrix.compose(I2.matrix)
    for t in b_range:
        pieces["iota_B"][t] = iota_b
        ient += place(iota_b, ("B", t), ("B", m - t))
    iota = ChainMap(cx, cx, Matrix.from_entries(U_RING, n, n, ient))
    cone.iota = iota
    cone.H = H
    cone.cfi = build_cfi(IotaComplex(cx, iota), check=False)
    return cone


def default_bound(K: IotaKComplex, m: int) -> int:
    return K.max_abs_alexander() + abs(m) + 1


def build_cone(K: IotaKComplex, framing: int, b: int | None = None, flip: ChainMap | None = None) -> SurgeryCone:
    if framing == 0:
        raise SurgeryError("framing 0 is not supported")
    if b is None:
        b = default_bound(K, framing)
    if b < K.max_abs_alexander() + 1:
        raise SurgeryError(f"truncation bound {b} is below max|A| + 1 = {K.max_abs_alexander() + 1}")
    flip = flip or build_flip(K, framing)
    return _assemble(K, framing, b, flip, False, None, None)


def build_involutive_cone(K: IotaKComplex, framing: int, b: int | None = None,
                          flip: ChainMap | None = None) -> SurgeryCone:
    if framing == 0:
        raise SurgeryError("framing 0 is not supported")
    if framing % 2:
        raise SurgeryError("the involutive cone needs an even framing")
    if b is None:
        b = default_bound(K, framing)
    if b < K.max_abs_alexander() + 1:
        raise SurgeryError(f"truncation bound {b} is below max|A| + 1 = {K.max_abs_alexander() + 1}")
    flip = flip or build_flip(K, framing)
    I2, _I1, H = solve_h(K, flip)
    return _assemble(K, framing, b, flip, True, H, I2)


def validate_cone(X: SurgeryCone, check_iota_square: bool = True) -> Report:
    rep = Report("surgery cone")
    rep.add("cone differential squares to zero", X.complex.d.compose(X.complex.d).is_zero())
    rep.add("cone differential is homogeneous", X.complex.differential_map().is_homogeneous())
    if X.involutive:
        rep.add("iota_X is a chain map (length-2 relation of the CFI square)", X.iota.is_chain_map())
        rep.add("iota_X is grading preserving", X.iota.is_homogeneous())
        rep.add("CFI differential squares to zero", X.cfi.d.compose(X.cfi.d).is_zero())
        if check_iota_square:
            h = homotopy_solve(X.iota.compose(X.iota), X.complex.identity())
            rep.add("iota_X^2 ~ id", h is not None,
                    "" if h is None else ("exactly" if h.is_zero() else f"homotopy with {h.matrix.nnz()} entries"))
            rep.data["iota_square_homotopy"] = h
    return rep


# -- the cobordism map J --------------------------------------------------------------

def bi_complex(X: SurgeryCone) -> FreeComplex:
    """BI_n: the cone of Q(1 + iota_B) on B_n, graded so that v_n has degree 0."""
    n = X.framing // 2
    K = X.knot
    fb = extract_flagged(K, "B", n)
    sig = sigma_a(n, X.framing)
    base = FreeComplex(U_RING, [Generator(f"B{n}:{g.name}", (g.gr[0] + sig,)) for g in fb.complex.generators],
                       fb.complex.d)
    iota = ChainMap(base, base, X.pieces["iota_B"][n])
    return build_cfi(IotaComplex(base, iota), check=False)


def cobordism_map_J(X: SurgeryCone) -> ChainMap:
    """J = v_n Pi^A_n + Q Pi^B_n iota_X from CFI of the cone to BI_n."""
    if not X.involutive:
        raise SurgeryError("J needs the involutive cone")
    n = X.framing // 2
    if n not in X.a_range or n not in X.b_range or -n not in X.a_range:
        raise SurgeryError(f"n = {n} lies outside the truncation")
    target = bi_complex(X)
    src = X.cfi
    q = UQ_RING.mono(0, q=1)
    entries = []
    an = X.blocks[("A", n)]
    for i, j, c in X.pieces["v"][n].entries():
        entries.append((an[i], j, c.convert(UQ_RING)))
    amn = X.blocks[("A", -n)]
    hv = X.pieces["Hvt"].get(-n)
    if hv is not None:
        for i, j, c in hv.entries():
            entries.append((amn[i], j, c.convert(UQ_RING) * q))
    # B_t with m - t = n, i.e. t = n
    bn = X.blocks[("B", n)]
    for i, j, c in X.pieces["iota_B"][n].entries():
        entries.append((bn[i], j, c.convert(UQ_RING) * q))
    mat = Matrix.from_entries(UQ_RING, src.n, target.n, entries)
    return ChainMap(src, target, mat)


def j_report(X: SurgeryCone) -> Report:
    rep = Report("cobordism map J")
    J = cobordism_map_J(X)
    rep.add("J is a chain map", J.is_chain_map())
    rep.add("J is homogeneous of degree 0", J.is_homogeneous())
    from .homology import localized_induced_rank
    r = localized_induced_rank(J)
    rep.data.update(map=J, localized_rank=r, target_rank=localized_rank(J.target))
    return rep


def cone_summary(X: SurgeryCone) -> dict:
    out = {"framing": X.framing, "bound": X.bound, "generators": X.complex.n, "spinc": {}}
    for r, h in X.homology_by_spinc().items():
        out["spinc"][str(r)] = h.to_dict()
    if X.involutive:
        classes = X.self_conjugate_classes()
        sec = X.sector(classes, involutive=True)
        out["self_conjugate_classes"] = classes
        out["self_conjugate_cfi"] = homology(sec).to_dict()
        out["self_conjugate_towers"] = localized_rank(sec)
        qa = localized_q_action(sec)
        out["self_conjugate_q_rank"] = _rank01(qa)
    return out


def _rank01(rows: list[list[int]]) -> int:
    from .linalg import gf2_rank
    return gf2_rank(int("".join(map(str, r[::-1])) or "0", 2) for r in rows)
