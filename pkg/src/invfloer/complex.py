"""Free graded chain complexes, chain maps and the homotopy solver."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import GF2Elim, Matrix
from .report import Report
from .ring import Coefficient, Monomial, Ring, RingError, U_RING, UQ_RING


class ComplexError(ValueError):
    pass


Grading = tuple[Fraction, ...]


def as_grading(gr: Iterable) -> Grading:
    if isinstance(gr, (int, Fraction, str)):
        gr = (gr,)
    return tuple(Fraction(x) for x in gr)


def _add(a: Sequence, b: Sequence) -> Grading:
    return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b))


def _sub(a: Sequence, b: Sequence) -> Grading:
    return tuple(Fraction(x) - Fraction(y) for x, y in zip(a, b))


@dataclass(frozen=True)
class Generator:
    name: str
    gr: Grading


class FreeComplex:
    """A finitely generated free complex with a sparse differential."""

    def __init__(self, ring: Ring, generators: Sequence[Generator], differential: Matrix | None = None) -> None:
        self.ring = ring
        self.generators = tuple(generators)
        n = len(self.generators)
        self.d = differential if differential is not None else Matrix.zero(ring, n, n)
        if self.d.shape != (n, n) or self.d.ring != ring:
            raise ComplexError("differential does not match the generators")
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        if len(self.index) != n:
            raise ComplexError("duplicate generator names")
        for g in self.generators:
            if len(g.gr) != ring.grading_length:
                raise ComplexError(f"generator {g.name!r} needs a grading of length {ring.grading_length}")

    @classmethod
    def build(cls, ring: Ring, gens: Iterable[tuple[str, Iterable]],
              diff: Iterable[tuple[str, str, Coefficient | str]] = ()) -> "FreeComplex":
        generators = [Generator(name, as_grading(gr)) for name, gr in gens]
        index = {g.name: i for i, g in enumerate(generators)}
        entries = []
        for src, tgt, c in diff:
            for name in (src, tgt):
                if name not in index:
                    raise ComplexError(f"unknown generator {name!r}")
            if isinstance(c, str):
                c = ring.parse_coeff(c)
            entries.append((index[src], index[tgt], c))
        n = len(generators)
        return cls(ring, generators, Matrix.from_entries(ring, n, n, entries))

    @property
    def n(self) -> int:
        return len(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def gr(self, i: int) -> Grading:
        return self.generators[i].gr

    def alexander(self, i: int) -> tuple[Fraction, ...]:
        return self.ring.alexander_from_grading(self.gr(i))

    def maslov_candidates(self, i: int) -> tuple[Fraction, Fraction]:
        """(gr_u, (gr_u + gr_v)/2); both readings of a two-variable grading."""
        g = self.gr(i)
        return g[0], (g[0] + g[1]) / 2

    def structurally_equal(self, other: "FreeComplex") -> bool:
        return self.ring == other.ring and self.generators == other.generators and self.d == other.d

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeComplex):
            return NotImplemented
        return self.structurally_equal(other)

    def __hash__(self) -> int:
        return hash((self.ring, self.generators))

    def __repr__(self) -> str:
        return f"FreeComplex({self.ring}, {self.n} generators)"

    def convert(self, ring: Ring) -> "FreeComplex":
        return FreeComplex(ring, self.generators, self.d.convert(ring))

    def renamed(self, fn) -> "FreeComplex":
        return FreeComplex(self.ring, [Generator(fn(g.name), g.gr) for g in self.generators], self.d)

    def shifted(self, shift: Sequence) -> "FreeComplex":
        return FreeComplex(self.ring, [Generator(g.name, _add(g.gr, shift)) for g in self.generators], self.d)

    def permuted(self, order: Sequence[int]) -> "FreeComplex":
        """Reorder generators; ``order[k]`` is the old index of new generator k."""
        return FreeComplex(self.ring, [self.generators[i] for i in order], self.d.restrict(list(order), list(order)))

    def sub(self, indices: Sequence[int]) -> "FreeComplex":
        """The complex spanned by ``indices`` with the restricted differential."""
        idx = list(indices)
        return FreeComplex(self.ring, [self.generators[i] for i in idx], self.d.restrict(idx, idx))

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, Matrix.identity(self.ring, self.n))

    def zero_map(self, target: "FreeComplex | None" = None, degree: Sequence | None = None,
                 skew: bool = False) -> "ChainMap":
        target = target or self
        deg = as_grading(degree) if degree is not None else (Fraction(0),) * self.ring.grading_length
        return ChainMap(self, target, Matrix.zero(self.ring, self.n, target.n), deg, skew)

    def differential_map(self) -> "ChainMap":
        return ChainMap(self, self, self.d, self.ring.differential_degree)


class ChainMap:
    """A module map between free complexes; chain property is checked, not assumed."""

    def __init__(self, source: FreeComplex, target: FreeComplex, matrix: Matrix,
                 degree: Sequence | None = None, skew: bool = False) -> None:
        if matrix.shape != (source.n, target.n):
            raise ComplexError(f"matrix shape {matrix.shape} does not fit {source.n}->{target.n}")
        if source.ring != target.ring or matrix.ring != source.ring:
            raise ComplexError("ring mismatch between map and complexes")
        if skew and not source.ring.two_variable:
            skew = False
        self.source = source
        self.target = target
        self.matrix = matrix
        self.degree = as_grading(degree) if degree is not None else (Fraction(0),) * source.ring.grading_length
        self.skew = skew

    @property
    def ring(self) -> Ring:
        return self.source.ring

    @property
    def equivariance(self) -> str:
        return "skew" if self.skew else "plain"

    @classmethod
    def from_entries(cls, source: FreeComplex, target: FreeComplex,
                     entries: Iterable[tuple[str, str, Coefficient | str]],
                     degree: Sequence | None = None, skew: bool = False) -> "ChainMap":
        ring = source.ring
        out = []
        for a, b, c in entries:
            if a not in source.index:
                raise ComplexError(f"unknown source generator {a!r}")
            if b not in target.index:
                raise ComplexError(f"unknown target generator {b!r}")
            if isinstance(c, str):
                c = ring.parse_coeff(c)
            out.append((source.index[a], target.index[b], c))
        return cls(source, target, Matrix.from_entries(ring, source.n, target.n, out), degree, skew)

    def image(self, name: str) -> dict[str, Coefficient]:
        i = self.source.index[name]
        return {self.target.generators[j].name: c for j, c in self.matrix.data.get(i, {}).items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.matrix == other.matrix and self.skew == other.skew
                and self.source.n == other.source.n and self.target.n == other.target.n)

    def __hash__(self) -> int:
        return hash(self.matrix)

    def same_shape(self, other: "ChainMap") -> bool:
        return (self.source.structurally_equal(other.source) and self.target.structurally_equal(other.target)
                and self.skew == other.skew and self.degree == other.degree)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.skew != other.skew or self.matrix.shape != other.matrix.shape:
            raise ComplexError("cannot add maps of different shape or equivariance")
        return ChainMap(self.source, self.target, self.matrix + other.matrix, self.degree, self.skew)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        if other.target.n != self.source.n:
            raise ComplexError("composition shape mismatch")
        mat = self.matrix.compose(other.matrix, conj_other=self.skew)
        d_other = self.ring.swap_grading(other.degree) if self.skew else other.degree
        return ChainMap(other.source, self.target, mat, _add(d_other, self.degree), self.skew != other.skew)

    __matmul__ = compose

    def scale(self, c: Coefficient, degree_shift: Sequence | None = None) -> "ChainMap":
        deg = self.degree if degree_shift is None else _add(self.degree, degree_shift)
        return ChainMap(self.source, self.target, self.matrix.scale(c), deg, self.skew)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def commutator(self) -> Matrix:
        """The matrix of d_T f + f d_S."""
        left = self.target.d.compose(self.matrix)
        right = self.matrix.compose(self.source.d, conj_other=self.skew)
        return left + right

    def is_chain_map(self) -> bool:
        return self.commutator().is_zero()

    def homogeneity_violations(self) -> list[tuple[str, str, str]]:
        ring = self.ring
        bad = []
        for i, j, c in self.matrix.entries():
            src = self.source.gr(i)
            if self.skew:
                src = ring.swap_grading(src)
            want = _add(src, self.degree)
            for m in c.terms:
                if _add(self.target.gr(j), ring.weight(m)) != want:
                    bad.append((self.source.generators[i].name, self.target.generators[j].name, str(c)))
                    break
        return bad

    def is_homogeneous(self) -> bool:
        return not self.homogeneity_violations()

    def convert(self, ring: Ring) -> "ChainMap":
        return ChainMap(self.source.convert(ring), self.target.convert(ring), self.matrix.convert(ring),
                        self.degree, self.skew)

    def __repr__(self) -> str:
        return f"ChainMap({self.source.n}->{self.target.n}, degree={[str(x) for x in self.degree]}, {self.equivariance})"


def identity(c: FreeComplex) -> ChainMap:
    return c.identity()


def validate_complex(c: FreeComplex) -> Report:
    rep = Report("complex")
    d2 = c.d.compose(c.d)
    bad = [f"{c.generators[i].name}->{c.generators[j].name}: {x}" for i, j, x in d2.entries()]
    rep.add("d^2 = 0", not bad, "; ".join(bad[:5]))
    hv = c.differential_map().homogeneity_violations()
    rep.add("homogeneous differential", not hv, "; ".join(f"{a}->{b}: {x}" for a, b, x in hv[:5]))
    if c.ring.kind == "link":
        off = []
        for g in c.generators:
            if (g.gr[0] - g.gr[1]) / 2 != sum(g.gr[2:]):
                off.append(g.name)
        rep.add("Alexander gradings sum to (gr_u - gr_v)/2", not off, ", ".join(off))
    return rep


def validate_map(f: ChainMap) -> Report:
    rep = Report("map")
    com = f.commutator()
    bad = [f"{f.source.generators[i].name}->{f.target.generators[j].name}: {x}" for i, j, x in com.entries()]
    rep.add("chain map", not bad, "; ".join(bad[:5]))
    hv = f.homogeneity_violations()
    rep.add("homogeneous of declared degree", not hv, "; ".join(f"{a}->{b}: {x}" for a, b, x in hv[:5]))
    return rep


# -- formal derivatives --------------------------------------------------------

def derivative_map(c: FreeComplex, var: int) -> ChainMap:
    ring = c.ring
    mat = c.d.map_entries(lambda x: x.derivative(var))
    exps = [0] * ring.nvars
    exps[var] = 1
    w = ring.weight(Monomial(tuple(exps), 0))
    return ChainMap(c, c, mat, _sub(ring.differential_degree, w))


def phi(c: FreeComplex, component: int = 1) -> ChainMap:
    """Differentiate the differential with respect to U (or u, or u_component)."""
    if c.ring.kind in ("U", "UQ", "UV"):
        if component != 1:
            raise ComplexError(f"mode {c.ring} has a single component")
        return derivative_map(c, 0)
    return derivative_map(c, c.ring.var_index(f"u{component}"))


def psi(c: FreeComplex, component: int = 1) -> ChainMap:
    """Differentiate the differential with respect to v (two-variable modes only)."""
    if not c.ring.two_variable:
        raise ComplexError("psi needs a two-variable mode")
    if c.ring.kind == "UV":
        if component != 1:
            raise ComplexError("UV mode has a single component")
        return derivative_map(c, 1)
    return derivative_map(c, c.ring.var_index(f"v{component}"))


# -- constructions -------------------------------------------------------------

def _unique_names(taken: set[str], names: list[str]) -> list[str]:
    out = []
    for n in names:
        m = n
        while m in taken:
            m += "'"
        taken.add(m)
        out.append(m)
    return out


def direct_sum(*parts: FreeComplex) -> FreeComplex:
    if not parts:
        raise ComplexError("direct_sum needs at least one summand")
    ring = parts[0].ring
    gens: list[Generator] = []
    entries = []
    taken: set[str] = set()
    off = 0
    for p in parts:
        names = _unique_names(taken, p.names())
        gens += [Generator(nm, g.gr) for nm, g in zip(names, p.generators)]
        entries += [(i + off, j + off, c) for i, j, c in p.d.entries()]
        off += p.n
    return FreeComplex(ring, gens, Matrix.from_entries(ring, off, off, entries))


def mapping_cone(f: ChainMap, check: bool = True) -> FreeComplex:
    """Cone of f: generators of the source, then shifted copies of the target."""
    if f.skew:
        raise ComplexError("the cone of a skew map is not a module complex")
    if check and not f.is_chain_map():
        raise ComplexError("mapping_cone needs a chain map")
    S, T = f.source, f.target
    ring = S.ring
    shift = _sub(ring.differential_degree, f.degree)
    taken = set(S.names())
    tnames = _unique_names(taken, T.names())
    gens = list(S.generators) + [Generator(nm, _add(g.gr, shift)) for nm, g in zip(tnames, T.generators)]
    n = S.n + T.n
    entries = list(S.d.entries())
    entries += [(i, S.n + j, c) for i, j, c in f.matrix.entries()]
    entries += [(S.n + i, S.n + j, c) for i, j, c in T.d.entries()]
    return FreeComplex(ring, gens, Matrix.from_entries(ring, n, n, entries))


def tensor_product(a: FreeComplex, b: FreeComplex, sep: str = "|") -> FreeComplex:
    """Tensor product over the common ring (characteristic 2, no signs)."""
    if a.ring != b.ring:
        raise ComplexError("tensor product needs a common ring")
    ring = a.ring
    gens = []
    for x in a.generators:
        for y in b.generators:
            gens.append(Generator(f"{x.name}{sep}{y.name}", _add(x.gr, y.gr)))
    nb = b.n
    entries = []
    for i, j, c in a.d.entries():
        for k in range(nb):
            entries.append((i * nb + k, j * nb + k, c))
    for k, l, c in b.d.entries():
        for i in range(a.n):
            entries.append((i * nb + k, i * nb + l, c))
    n = a.n * nb
    return FreeComplex(ring, gens, Matrix.from_entries(ring, n, n, entries))


def tensor_maps(f: ChainMap, g: ChainMap, source: FreeComplex, target: FreeComplex) -> ChainMap:
    """f (x) g between given tensor product complexes (ordering as in tensor_product)."""
    nb_s, nb_t = g.source.n, g.target.n
    entries = []
    for i, j, c in f.matrix.entries():
        for k, l, d in g.matrix.entries():
            entries.append((i * nb_s + k, j * nb_t + l, c * d))
    mat = Matrix.from_entries(source.ring, source.n, target.n, entries)
    return ChainMap(source, target, mat, _add(f.degree, g.degree), f.skew)


# -- linear solver -----------------------------------------------------------------

class _Block:
    def __init__(self, source: FreeComplex, target: FreeComplex, degree: Grading, skew: bool, offset: int) -> None:
        self.source = source
        self.target = target
        self.degree = degree
        self.skew = skew
        self.offset = offset
        ring = source.ring
        self.vars: list[tuple[int, int, Monomial]] = []
        for i in range(source.n):
            g = source.gr(i)
            if skew:
                g = ring.swap_grading(g)
            want = _add(g, degree)
            for j in range(target.n):
                for m in ring.monomials_of_weight(_sub(want, target.gr(j))):
                    self.vars.append((i, j, m))

    def assemble(self, assignment: int) -> ChainMap:
        ring = self.source.ring
        entries = []
        for k, (i, j, m) in enumerate(self.vars):
            if assignment >> (self.offset + k) & 1:
                entries.append((i, j, Coefficient(ring, frozenset([m]))))
        mat = Matrix.from_entries(ring, self.source.n, self.target.n, entries)
        return ChainMap(self.source, self.target, mat, self.degree, self.skew)


Operand = tuple[Matrix, bool]


def _operand(x) -> Operand | None:
    if x is None:
        return None
    if isinstance(x, ChainMap):
        return (x.matrix, x.skew)
    if isinstance(x, FreeComplex):
        return (x.d, False)
    return x


class LinearSystem:
    """Collect equations sum(L o X o R) = constant in unknown homogeneous maps X."""

    def __init__(self, ring: Ring) -> None:
        self.ring = ring
        self.blocks: list[_Block] = []
        self.nvars = 0
        self.rows: dict[tuple, int] = {}
        self.rhs: set[tuple] = set()
        self._eq = 0

    def unknown(self, source: FreeComplex, target: FreeComplex, degree: Sequence, skew: bool = False) -> int:
        blk = _Block(source, target, as_grading(degree), skew and source.ring.two_variable, self.nvars)
        self.blocks.append(blk)
        self.nvars += len(blk.vars)
        return len(self.blocks) - 1

    def equation(self, terms: Iterable[tuple], constant: Matrix | None = None) -> None:
        """Add one matrix equation.  Each term is ``(left, block, right)``; left
        and right may be None, a ChainMap, a FreeComplex (meaning its
        differential) or a ``(Matrix, skew)`` pair."""
        eq = self._eq
        self._eq += 1
        rows = self.rows
        for left, b, right in terms:
            L, R = _operand(left), _operand(right)
            blk = self.blocks[b]
            # incoming coefficients for each source index i of the block
            if R is None:
                pre = {i: [(i, None)] for i in range(blk.source.n)}
            else:
                Rm, _ = R
                pre: dict[int, list] = {}
                for a, row in Rm.data.items():
                    for i, c in row.items():
                        pre.setdefault(i, []).append((a, c.conj() if blk.skew else c))
            for k, (i, j, m) in enumerate(blk.vars):
                bit = 1 << (blk.offset + k)
                for a, c in pre.get(i, ()):
                    mc = Coefficient(self.ring, frozenset([m]))
                    val = mc if c is None else c * mc
                    if not val:
                        continue
                    if L is None:
                        outs = [(j, val)]
                    else:
                        Lm, lskew = L
                        v2 = val.conj() if lskew else val
                        outs = [(kk, v2 * d) for kk, d in Lm.data.get(j, {}).items()]
                    for t, coeff in outs:
                        for mono in coeff.terms:
                            key = (eq, a, t, mono)
                            rows[key] = rows.get(key, 0) ^ bit
        if constant is not None:
            for a, t, c in constant.entries():
                for mono in c.terms:
                    self.rhs ^= {(eq, a, t, mono)}

    def _elim(self) -> GF2Elim:
        el = GF2Elim(self.nvars)
        for key, r in self.rows.items():
            if key in self.rhs:
                r |= el.rhs_bit
            el.insert(r)
        for key in self.rhs:
            if key not in self.rows:
                el.insert(el.rhs_bit)
        return el

    def solve(self) -> list[ChainMap] | None:
        el = self._elim()
        x = el.solve()
        if x is None:
            return None
        return [b.assemble(x) for b in self.blocks]

    def nullspace(self) -> list[list[ChainMap]]:
        el = self._elim()
        return [[b.assemble(v) for b in self.blocks] for v in el.nullspace()]


def homotopy_degree(f: ChainMap) -> Grading:
    return _sub(f.degree, f.ring.differential_degree)


def homotopy_solve(f: ChainMap, g: ChainMap) -> ChainMap | None:
    """Find h with d h + h d = f + g, or None if no homogeneous h exists."""
    if f.matrix.shape != g.matrix.shape or f.skew != g.skew:
        raise ComplexError("homotopy_solve needs maps of the same shape and equivariance")
    if f.degree != g.degree and not (f.is_zero() or g.is_zero()):
        raise ComplexError("homotopy_solve needs maps of the same degree")
    deg = f.degree if not f.is_zero() else g.degree
    sys = LinearSystem(f.ring)
    h = sys.unknown(f.source, f.target, _sub(deg, f.ring.differential_degree), f.skew)
    sys.equation([(f.target, h, None), (None, h, f.source)], f.matrix + g.matrix)
    sol = sys.solve()
    return None if sol is None else sol[0]


def is_null_homotopic(f: ChainMap) -> bool:
    return homotopy_solve(f, ChainMap(f.source, f.target, Matrix.zero(f.ring, f.source.n, f.target.n),
                                      f.degree, f.skew)) is not None


def find_homotopy_inverse(f: ChainMap) -> tuple[ChainMap, ChainMap, ChainMap] | None:
    """Solve jointly for (g, k, k') with g f + id = dk + kd and f g + id = dk' + k'd."""
    ring = f.ring
    S, T = f.source, f.target
    dd = ring.differential_degree
    d_f = ring.swap_grading(f.degree) if f.skew else f.degree
    d_g = tuple(-x for x in d_f)
    zero = (Fraction(0),) * ring.grading_length
    hdeg = _sub(zero, dd)
    sys = LinearSystem(ring)
    g = sys.unknown(T, S, d_g, f.skew)
    k = sys.unknown(S, S, hdeg)
    k2 = sys.unknown(T, T, hdeg)
    sys.equation([(S, g, None), (None, g, T)])
    sys.equation([(None, g, f), (S, k, None), (None, k, S)], Matrix.identity(ring, S.n))
    sys.equation([(f, g, None), (T, k2, None), (None, k2, T)], Matrix.identity(ring, T.n))
    sol = sys.solve()
    return None if sol is None else (sol[0], sol[1], sol[2])


def chain_map_space(source: FreeComplex, target: FreeComplex, degree: Sequence,
                    skew: bool = False) -> list[ChainMap]:
    """An F2 basis of the homogeneous chain maps of the given degree."""
    sys = LinearSystem(source.ring)
    x = sys.unknown(source, target, as_grading(degree), skew)
    sys.equation([(target, x, None), (None, x, source)])
    return [sol[0] for sol in sys.nullspace()]


def homogeneous_maps(source: FreeComplex, target: FreeComplex, degree: Sequence,
                     skew: bool = False) -> list[ChainMap]:
    """Every single-monomial homogeneous map of the degree (a basis, chain or not)."""
    sys = LinearSystem(source.ring)
    sys.unknown(source, target, as_grading(degree), skew)
    blk = sys.blocks[0]
    return [blk.assemble(1 << k) for k in range(len(blk.vars))]
