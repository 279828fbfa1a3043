"""Sparse coefficient matrices and F2 Gaussian elimination on int bitsets."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

from .ring import Coefficient, Ring


class Matrix:
    """Sparse matrix of coefficients.

    ``data[i][j]`` is the coefficient of target generator ``j`` in the image
    of source generator ``i``.  Zero entries are never stored.
    """

    __slots__ = ("ring", "n_src", "n_tgt", "data")

    def __init__(self, ring: Ring, n_src: int, n_tgt: int,
                 data: dict[int, dict[int, Coefficient]] | None = None) -> None:
        self.ring = ring
        self.n_src = n_src
        self.n_tgt = n_tgt
        self.data = {i: row for i, row in (data or {}).items() if row}

    @classmethod
    def zero(cls, ring: Ring, n_src: int, n_tgt: int) -> "Matrix":
        return cls(ring, n_src, n_tgt)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        one = ring.one()
        return cls(ring, n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def from_entries(cls, ring: Ring, n_src: int, n_tgt: int,
                     entries: Iterable[tuple[int, int, Coefficient]]) -> "Matrix":
        data: dict[int, dict[int, Coefficient]] = {}
        for i, j, c in entries:
            if not (0 <= i < n_src and 0 <= j < n_tgt):
                raise IndexError(f"entry ({i}, {j}) outside a {n_src}x{n_tgt} matrix")
            row = data.setdefault(i, {})
            c = row[j] + c if j in row else c
            if c:
                row[j] = c
            else:
                row.pop(j, None)
        return cls(ring, n_src, n_tgt, data)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_src, self.n_tgt)

    def get(self, i: int, j: int) -> Coefficient:
        return self.data.get(i, {}).get(j, self.ring.zero())

    def entries(self) -> Iterator[tuple[int, int, Coefficient]]:
        for i in sorted(self.data):
            row = self.data[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self.data == other.data)

    def __hash__(self) -> int:
        return hash((self.ring, self.shape, tuple(self.entries())))

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape or self.ring != other.ring:
            raise ValueError(f"shape mismatch: {self.shape}/{self.ring} vs {other.shape}/{other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        data = {i: dict(r) for i, r in self.data.items()}
        for i, row in other.data.items():
            tgt = data.setdefault(i, {})
            for j, c in row.items():
                s = tgt[j] + c if j in tgt else c
                if s:
                    tgt[j] = s
                else:
                    del tgt[j]
        return Matrix(self.ring, self.n_src, self.n_tgt, data)

    def compose(self, other: "Matrix", conj_other: bool = False) -> "Matrix":
        """Return ``self o other`` (apply ``other`` first).

        With ``conj_other`` the entries of ``other`` are u/v exchanged first,
        which is the rule for composing on the left with a skew map.
        """
        if other.n_tgt != self.n_src:
            raise ValueError(f"cannot compose {self.shape} after {other.shape}")
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        data: dict[int, dict[int, Coefficient]] = {}
        for i, row in other.data.items():
            acc: dict[int, Coefficient] = {}
            for j, c in row.items():
                nxt = self.data.get(j)
                if not nxt:
                    continue
                if conj_other:
                    c = c.conj()
                for k, d in nxt.items():
                    p = c * d
                    if not p:
                        continue
                    s = acc[k] + p if k in acc else p
                    if s:
                        acc[k] = s
                    else:
                        del acc[k]
            if acc:
                data[i] = acc
        return Matrix(self.ring, other.n_src, self.n_tgt, data)

    def map_entries(self, fn: Callable[[Coefficient], Coefficient], ring: Ring | None = None) -> "Matrix":
        data: dict[int, dict[int, Coefficient]] = {}
        for i, row in self.data.items():
            new = {j: fn(c) for j, c in row.items()}
            new = {j: c for j, c in new.items() if c}
            if new:
                data[i] = new
        return Matrix(ring or self.ring, self.n_src, self.n_tgt, data)

    def conj(self) -> "Matrix":
        return self.map_entries(lambda c: c.conj())

    def scale(self, c: Coefficient) -> "Matrix":
        return self.map_entries(lambda x: x * c)

    def convert(self, ring: Ring) -> "Matrix":
        return self.map_entries(lambda c: c.convert(ring), ring)

    def restrict(self, src: list[int], tgt: list[int]) -> "Matrix":
        """Submatrix on the listed source and target indices (in that order)."""
        tpos = {j: n for n, j in enumerate(tgt)}
        entries = []
        for a, i in enumerate(src):
            for j, c in self.data.get(i, {}).items():
                if j in tpos:
                    entries.append((a, tpos[j], c))
        return Matrix.from_entries(self.ring, len(src), len(tgt), entries)

    def embed(self, n_src: int, n_tgt: int, src_pos: list[int], tgt_pos: list[int]) -> "Matrix":
        """Place this matrix as a block inside a larger one."""
        entries = [(src_pos[i], tgt_pos[j], c) for i, j, c in self.entries()]
        return Matrix.from_entries(self.ring, n_src, n_tgt, entries)

    def __repr__(self) -> str:
        body = ", ".join(f"{i}->{j}: {c}" for i, j, c in self.entries())
        return f"Matrix({self.n_src}x{self.n_tgt}, {{{body}}})"


def block_sum(ring: Ring, n_src: int, n_tgt: int, blocks: Iterable[Matrix]) -> Matrix:
    acc = Matrix.zero(ring, n_src, n_tgt)
    for b in blocks:
        acc = acc + b
    return acc


class GF2Elim:
    """Incremental row reduction over F2 with rows stored as Python ints.

    Bits ``0 .. nvars-1`` are variables; bit ``nvars`` is the right-hand side.
    Pivots are taken at the lowest set bit, so back-substitution with every
    free variable set to zero gives a deterministic solution.
    """

    def __init__(self, nvars: int) -> None:
        self.nvars = nvars
        self.rhs_bit = 1 << nvars
        self.var_mask = self.rhs_bit - 1
        self.pivots: dict[int, int] = {}
        self.inconsistent = False

    def reduce(self, row: int) -> int:
        while row & self.var_mask:
            low = row & -row
            p = low.bit_length() - 1
            piv = self.pivots.get(p)
            if piv is None:
                return row
            row ^= piv
        return row

    def insert(self, row: int) -> bool:
        """Add a row.  Returns True when it raised the rank."""
        row = self.reduce(row)
        if row & self.var_mask:
            low = row & -row
            self.pivots[low.bit_length() - 1] = row
            return True
        if row:
            self.inconsistent = True
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self) -> int | None:
        if self.inconsistent:
            return None
        return self._back_substitute(0)

    def _back_substitute(self, free_assignment: int) -> int:
        x = free_assignment
        for p in sorted(self.pivots, reverse=True):
            row = self.pivots[p]
            rest = row & self.var_mask & ~(1 << p)
            val = (bin(rest & x).count("1") + (1 if row & self.rhs_bit else 0)) & 1
            if val:
                x |= 1 << p
            else:
                x &= ~(1 << p)
        return x

    def nullspace(self) -> list[int]:
        """Basis of the homogeneous solution space (right-hand sides ignored)."""
        saved = {p: r & self.var_mask for p, r in self.pivots.items()}
        basis = []
        hom = GF2Elim(self.nvars)
        hom.pivots = saved
        for f in range(self.nvars):
            if f in saved:
                continue
            basis.append(hom._back_substitute(1 << f))
        return basis


def gf2_rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                break
    return len(pivots)


class GF2Span:
    """Echelon basis of a subspace of F2^n, with reduction by highest bit."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            piv = self.pivots.get(top)
            if piv is None:
                return v
            v ^= piv
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.pivots[v.bit_length() - 1] = v
            return True
        return False

    def __len__(self) -> int:
        return len(self.pivots)


def gf2_kernel(columns: list[int]) -> list[int]:
    """Kernel of the F2 linear map sending basis vector i to ``columns[i]``.

    Kernel vectors are returned as bitmasks over the domain basis.
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for i, col in enumerate(columns):
        comb = 1 << i
        v = col
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                pv, pc = pivots[top]
                v ^= pv
                comb ^= pc
            else:
                pivots[top] = (v, comb)
                break
        if not v:
            kernel.append(comb)
    return kernel
