"""Homology over F2[U] by graded Smith reduction, plus an independent
brute-force count over F2[U]/U^delta."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .complex import ChainMap, ComplexError, FreeComplex, Generator
from .linalg import GF2Span, Matrix, gf2_kernel, gf2_rank
from .ring import U_RING, Coefficient


@dataclass
class GradedHomology:
    free_towers: list[Fraction] = field(default_factory=list)
    torsion: list[tuple[Fraction, int]] = field(default_factory=list)
    q_action: list[list[int]] | None = None

    def __post_init__(self) -> None:
        self.free_towers = sorted(self.free_towers, reverse=True)
        self.torsion = sorted(self.torsion, key=lambda t: (-t[0], t[1]))

    @property
    def rank(self) -> int:
        return len(self.free_towers)

    def same_as(self, other: "GradedHomology", shift: Fraction = Fraction(0)) -> bool:
        return (Counter(g + shift for g in self.free_towers) == Counter(other.free_towers)
                and Counter((g + shift, k) for g, k in self.torsion) == Counter(other.torsion))

    def shifted(self, shift) -> "GradedHomology":
        s = Fraction(shift)
        return GradedHomology([g + s for g in self.free_towers], [(g + s, k) for g, k in self.torsion],
                              self.q_action)

    def describe(self) -> str:
        parts = [f"F[U]_({_fmt(g)})" for g in self.free_towers]
        parts += [f"F[U]/U^{k}_({_fmt(g)})" for g, k in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        out = {"free_towers": [_fmt(g) for g in self.free_towers],
               "torsion": [[_fmt(g), k] for g, k in self.torsion]}
        if self.q_action is not None:
            out["q_action_localized"] = self.q_action
        return out


def _fmt(g: Fraction) -> str:
    return str(g.numerator) if g.denominator == 1 else f"{g.numerator}/{g.denominator}"


# -- U-mode exponent tables --------------------------------------------------

def _exponent_table(c: FreeComplex) -> dict[int, dict[int, int]]:
    """Entries of a homogeneous U-mode differential as bare U-exponents."""
    if c.ring.kind != "U":
        raise ComplexError(f"homology needs a U-mode complex, got {c.ring}")
    d: dict[int, dict[int, int]] = {}
    for i, j, x in c.d.entries():
        if len(x.terms) != 1:
            raise ComplexError(f"non-homogeneous entry {x} from {c.generators[i].name}")
        (m,) = x.terms
        k = m.exps[0]
        if c.gr(j)[0] - 2 * k != c.gr(i)[0] - 1:
            raise ComplexError(f"non-homogeneous entry {x} from {c.generators[i].name}")
        d.setdefault(i, {})[j] = k
    return d


def expand_q(c: FreeComplex) -> FreeComplex:
    """View a UQ-mode complex on N generators as a U-mode complex on 2N."""
    if c.ring.kind == "U":
        return c
    if c.ring.kind != "UQ":
        raise ComplexError(f"cannot expand a {c.ring} complex")
    n = c.n
    gens = list(c.generators) + [Generator(f"Q.{g.name}", (g.gr[0] - 1,)) for g in c.generators]
    entries = []
    for i, j, x in c.d.entries():
        c0, c1 = x.split_q()
        if c0:
            entries += [(i, j, c0), (n + i, n + j, c0)]
        if c1:
            entries.append((i, n + j, c1))
    return FreeComplex(U_RING, gens, Matrix.from_entries(U_RING, 2 * n, 2 * n, entries))


def expand_q_map(f: ChainMap, source: FreeComplex | None = None, target: FreeComplex | None = None) -> ChainMap:
    """U-mode version of a Q-equivariant map between expanded complexes."""
    S = source or expand_q(f.source)
    T = target or expand_q(f.target)
    if f.ring.kind == "U":
        return f
    ns, nt = f.source.n, f.target.n
    entries = []
    for i, j, x in f.matrix.entries():
        c0, c1 = x.split_q()
        if c0:
            entries += [(i, j, c0), (ns + i, nt + j, c0)]
        if c1:
            entries.append((i, nt + j, c1))
    return ChainMap(S, T, Matrix.from_entries(U_RING, 2 * ns, 2 * nt, entries), f.degree)


# -- Smith reduction ---------------------------------------------------------

def homology(c: FreeComplex, pivot: str = "first") -> GradedHomology:
    """Graded Smith reduction over F2[U].

    ``pivot`` chooses how ties between minimal-power entries are broken
    ("first" or "last" generator index); the result does not depend on it.
    UQ-mode complexes are expanded first and the Q-action on the localized
    homology is attached.
    """
    if c.ring.kind == "UQ":
        h = homology(expand_q(c), pivot)
        h.q_action = localized_q_action(c)
        return h
    if c.ring.two_variable:
        raise ComplexError("collapse or slice a two-variable complex before taking homology")
    d = _exponent_table(c)
    rev: dict[int, dict[int, int]] = {}
    for i, row in d.items():
        for j, k in row.items():
            rev.setdefault(j, {})[i] = k
    alive = set(range(c.n))
    torsion: list[tuple[Fraction, int]] = []
    sign = 1 if pivot == "first" else -1

    def toggle(i: int, j: int, k: int) -> None:
        row = d.setdefault(i, {})
        if j in row:
            if row[j] != k:
                raise ComplexError("non-homogeneous entry produced during reduction")
            del row[j]
            del rev[j][i]
        else:
            row[j] = k
            rev.setdefault(j, {})[i] = k

    while True:
        best = None
        for i, row in d.items():
            for j, k in row.items():
                key = (k, sign * i, sign * j)
                if best is None or key < best[0]:
                    best = (key, i, j, k)
        if best is None:
            break
        _, x, y, k = best
        xrow = dict(d[x])
        # clear column y using x
        for x2, k2 in list(rev.get(y, {}).items()):
            if x2 == x:
                continue
            m = k2 - k
            for z, kz in xrow.items():
                toggle(x2, z, kz + m)
            # the source basis change x2 -> x2 + U^m x alters coordinates along x
            for w, kw in list(rev.get(x2, {}).items()):
                toggle(w, x, kw + m)
        if rev.get(x):
            raise ComplexError("reduction invariant violated: differential hits a pivot source")
        # drop x and y (y is replaced by d(x)/U^k)
        for gen in (x, y):
            for z in list(d.get(gen, {})):
                toggle(gen, z, d[gen][z])
            for w in list(rev.get(gen, {})):
                toggle(w, gen, rev[gen][w])
            d.pop(gen, None)
            rev.pop(gen, None)
            alive.discard(gen)
        if k > 0:
            torsion.append((c.gr(y)[0], k))
        d = {i: r for i, r in d.items() if r}
    return GradedHomology([c.gr(i)[0] for i in sorted(alive)], torsion)


# -- localized homology (U = 1) ------------------------------------------------

def _localized_columns(c: FreeComplex) -> list[int]:
    cols = [0] * c.n
    for i, j, x in c.d.entries():
        if len(x.terms) % 2:
            cols[i] ^= 1 << j
    return cols


def localized_rank(c: FreeComplex) -> int:
    """Dimension over F2 of H(C) with U set to 1 (the number of free towers)."""
    if c.ring.kind == "UQ":
        c = expand_q(c)
    cols = _localized_columns(c)
    r = gf2_rank(cols)
    return c.n - 2 * r


def _localized_basis(c: FreeComplex) -> tuple[GF2Span, list[int]]:
    cols = _localized_columns(c)
    boundaries = GF2Span()
    for v in cols:
        boundaries.add(v)
    reps = []
    span = GF2Span()
    for p in boundaries.pivots.values():
        span.add(p)
    for z in gf2_kernel(cols):
        if span.add(z):
            reps.append(z)
    return boundaries, reps


def _coordinates(boundaries: GF2Span, reps: list[int], v: int) -> list[int]:
    """Coordinates of the class of v in the basis ``reps``."""
    n_b = len(boundaries.pivots)
    basis = list(boundaries.pivots.values()) + reps
    pivots: dict[int, tuple[int, int]] = {}
    for idx, b in enumerate(basis):
        comb = 1 << idx
        while b:
            top = b.bit_length() - 1
            if top in pivots:
                pb, pc = pivots[top]
                b ^= pb
                comb ^= pc
            else:
                pivots[top] = (b, comb)
                break
    comb = 0
    while v:
        top = v.bit_length() - 1
        if top not in pivots:
            raise ComplexError("vector is not a cycle")
        pb, pc = pivots[top]
        v ^= pb
        comb ^= pc
    return [(comb >> (n_b + r)) & 1 for r in range(len(reps))]


def localized_q_action(c: FreeComplex) -> list[list[int]]:
    """Matrix of Q on H(C) with U = 1; row r is the image of basis class r."""
    e = expand_q(c)
    n = c.n
    boundaries, reps = _localized_basis(e)
    out = []
    for z in reps:
        qz = 0
        for i in range(n):
            if z >> i & 1:
                qz |= 1 << (n + i)
        out.append(_coordinates(boundaries, reps, qz))
    return out


def localized_induced_rank(f: ChainMap) -> int:
    """Rank of the map induced by f on homology with U = 1."""
    S = expand_q(f.source) if f.ring.kind == "UQ" else f.source
    T = expand_q(f.target) if f.ring.kind == "UQ" else f.target
    g = expand_q_map(f, S, T) if f.ring.kind == "UQ" else f
    cols_s = _localized_columns(S)
    fcols = [0] * S.n
    for i, j, x in g.matrix.entries():
        if len(x.terms) % 2:
            fcols[i] ^= 1 << j
    bnd = GF2Span()
    for v in _localized_columns(T):
        bnd.add(v)
    base = len(bnd)
    for z in gf2_kernel(cols_s):
        img = 0
        for i in range(S.n):
            if z >> i & 1:
                img ^= fcols[i]
        bnd.add(img)
    return len(bnd) - base


def hat_induced_rank(f: ChainMap) -> tuple[int, int, int]:
    """(rank of f_*, dim H(source), dim H(target)) on homology with U = 0."""
    def cols(c: FreeComplex) -> list[int]:
        out = [0] * c.n
        for i, j, x in c.d.entries():
            if any(sum(m.exps) == 0 and m.q == 0 for m in x.terms):
                out[i] ^= 1 << j
        return out

    S, T = f.source, f.target
    cs, ct = cols(S), cols(T)
    fcols = [0] * S.n
    for i, j, x in f.matrix.entries():
        if any(sum(m.exps) == 0 and m.q == 0 for m in x.terms):
            fcols[i] ^= 1 << j
    bnd = GF2Span()
    for v in ct:
        bnd.add(v)
    base = len(bnd)
    for z in gf2_kernel(cs):
        img = 0
        for i in range(S.n):
            if z >> i & 1:
                img ^= fcols[i]
        bnd.add(img)
    dim_s = S.n - 2 * gf2_rank(cs)
    dim_t = T.n - 2 * gf2_rank(ct)
    return len(bnd) - base, dim_s, dim_t


# -- brute force over F2[U]/U^delta ---------------------------------------------

def truncated_dims(c: FreeComplex, delta: int) -> Counter:
    """F2-dimension of H(C/U^delta) in each grading, by plain linear algebra."""
    if c.ring.kind == "UQ":
        c = expand_q(c)
    basis: dict[Fraction, list[tuple[int, int]]] = {}
    for i in range(c.n):
        for p in range(delta):
            basis.setdefault(c.gr(i)[0] - 2 * p, []).append((i, p))
    pos = {g: {b: n for n, b in enumerate(lst)} for g, lst in basis.items()}
    rank: dict[Fraction, int] = {}
    for g, lst in basis.items():
        tgt = pos.get(g - 1, {})
        cols = []
        for i, p in lst:
            v = 0
            for j, x in c.d.data.get(i, {}).items():
                for m in x.terms:
                    q = p + m.exps[0]
                    if q < delta:
                        v ^= 1 << tgt[(j, q)]
            cols.append(v)
        rank[g] = gf2_rank(cols)
    out = Counter()
    for g, lst in basis.items():
        dim = len(lst) - rank[g] - rank.get(g + 1, 0)
        if dim:
            out[g] = dim
    return out


def predicted_truncated_dims(h: GradedHomology, delta: int) -> Counter:
    """What truncated_dims should report, read off from a Smith decomposition."""
    out = Counter()
    for g in h.free_towers:
        for j in range(delta):
            out[g - 2 * j] += 1
    for g, k in h.torsion:
        gx = g - 2 * k + 1
        if k >= delta:
            for j in range(delta):
                out[g - 2 * j] += 1
                out[gx - 2 * j] += 1
        else:
            for j in range(k):
                out[g - 2 * j] += 1
            for j in range(delta - k, delta):
                out[gx - 2 * j] += 1
    return Counter({g: n for g, n in out.items() if n})


def check_against_brute_force(c: FreeComplex, delta: int = 8) -> bool:
    h = homology(c)
    return (truncated_dims(c, delta) == predicted_truncated_dims(h, delta)
            and truncated_dims(c, delta + 2) == predicted_truncated_dims(h, delta + 2))
