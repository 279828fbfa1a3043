import random

from hypothesis import given
from hypothesis import strategies as st

from invfloer.linalg import GF2Elim, GF2Span, Matrix, gf2_kernel, gf2_rank
from invfloer.ring import U_RING, UV_RING


def rank_oracle(rows):
    """Plain list-of-lists elimination."""
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = max((len(r) for r in rows), default=0)
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


bitrows = st.lists(st.lists(st.integers(0, 1), min_size=8, max_size=8), max_size=10)


def to_int(row):
    return sum(b << i for i, b in enumerate(row))


@given(bitrows)
def test_rank_matches_oracle(rows):
    assert gf2_rank(to_int(r) for r in rows) == rank_oracle(rows)
    span = GF2Span()
    for r in rows:
        span.add(to_int(r))
    assert len(span) == rank_oracle(rows)


@given(bitrows)
def test_kernel_is_kernel(rows):
    cols = [to_int(r) for r in rows]
    ker = gf2_kernel(cols)
    assert len(ker) == len(cols) - rank_oracle(rows)
    for z in ker:
        acc = 0
        for i, c in enumerate(cols):
            if z >> i & 1:
                acc ^= c
        assert acc == 0


@given(bitrows, st.lists(st.integers(0, 1), min_size=8, max_size=8))
def test_solve_and_nullspace(rows, x):
    # equations: for each row r, <r, x> = b
    n = 8
    el = GF2Elim(n)
    xs = to_int(x)
    for r in rows:
        b = bin(to_int(r) & xs).count("1") % 2
        el.insert(to_int(r) | (el.rhs_bit if b else 0))
    sol = el.solve()
    assert sol is not None
    for r in rows:
        b = bin(to_int(r) & xs).count("1") % 2
        assert bin(to_int(r) & sol).count("1") % 2 == b
    for v in el.nullspace():
        for r in rows:
            assert bin(to_int(r) & v).count("1") % 2 == 0


def test_inconsistent_system():
    el = GF2Elim(2)
    el.insert(0b01)
    el.insert(0b01 | el.rhs_bit)
    assert el.solve() is None


def test_matrix_compose_and_conj():
    A = Matrix.from_entries(UV_RING, 2, 2, [(0, 1, UV_RING.parse_coeff("u"))])
    B = Matrix.from_entries(UV_RING, 2, 2, [(1, 0, UV_RING.parse_coeff("v^2"))])
    # B o A: 0 -> 1 -> 0 with coefficient u * v^2
    assert B.compose(A).get(0, 0) == UV_RING.parse_coeff("u*v^2")
    assert B.compose(A, conj_other=True).get(0, 0) == UV_RING.parse_coeff("v^3")
    assert A.conj().conj() == A


def test_restrict_embed_round_trip():
    rng = random.Random(3)
    entries = [(rng.randrange(4), rng.randrange(3), U_RING.mono(rng.randrange(3))) for _ in range(6)]
    M = Matrix.from_entries(U_RING, 4, 3, entries)
    R = M.restrict([2, 0], [1, 2])
    E = R.embed(4, 3, [2, 0], [1, 2])
    assert E.restrict([2, 0], [1, 2]) == R
    assert Matrix.identity(U_RING, 3).compose(M) == M
    assert M.compose(Matrix.identity(U_RING, 4)) == M
