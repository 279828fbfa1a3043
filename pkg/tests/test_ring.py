import pytest
from hypothesis import given
from hypothesis import strategies as st

from invfloer.ring import (U_RING, UQ_RING, UV_RING, Coefficient, Monomial, Ring, RingError,
                           coeff_add, coeff_mul, collapse_uv, parse_coefficient)

LINK2 = Ring("link", 2)
MODES = [U_RING, UQ_RING, UV_RING, LINK2]


def monomials(ring):
    exps = st.tuples(*[st.integers(0, 4)] * ring.nvars)
    q = st.integers(0, 1) if ring.has_q else st.just(0)
    return st.builds(Monomial, exps, q)


def coefficients(ring):
    return st.lists(monomials(ring), max_size=5).map(lambda ms: Coefficient(ring, ms))


mode = st.sampled_from(MODES)


def p(text, ring=U_RING):
    return ring.parse_coeff(text)


# -- worked examples -----------------------------------------------------------

def test_add_examples():
    assert coeff_add(p("U^2"), p("U^2")) == 0
    assert coeff_add(p("U"), p("U^3")) == p("U + U^3")
    assert coeff_add(p("Q + 1", UQ_RING), p("Q", UQ_RING)) == p("1", UQ_RING)


def test_mul_examples():
    assert coeff_mul(p("Q", UQ_RING), p("Q", UQ_RING)) == 0
    assert coeff_mul(p("U^2"), p("U^3")) == p("U^5")
    assert coeff_mul(p("u*v", UV_RING), p("u", UV_RING)) == p("u^2*v", UV_RING)


def test_collapse_examples():
    assert collapse_uv(p("u^2*v^2", UV_RING)) == p("U^2")
    assert collapse_uv(p("1", UV_RING)) == p("1")
    with pytest.raises(RingError):
        collapse_uv(p("u*v^3", UV_RING))


def test_collapse_lenient_keeps_residuals():
    out = collapse_uv(p("u*v^3 + u^2*v^2 + u^3", UV_RING), strict=False)
    assert out == {(0, 0): p("U^2"), (0, 2): p("U"), (3, 0): p("1")}


def test_mode_mismatch():
    with pytest.raises(RingError):
        p("U") + p("u", UV_RING)
    with pytest.raises(RingError):
        p("U") * p("1", UQ_RING)


def test_parse_errors():
    for bad in ["", "U +", "U^x", "w", "U**2"]:
        with pytest.raises(RingError):
            p(bad)
    with pytest.raises(RingError):
        p("Q")
    with pytest.raises(RingError):
        Ring.parse("UVW")


def test_rendering():
    assert str(p("U^2*Q + 1", UQ_RING)) == "1 + U^2*Q"
    assert str(p("v^3*u", UV_RING)) == "u*v^3"
    assert str(p("u1*v2 + 1", LINK2)) == "1 + u1*v2"
    assert str(p("U + U")) == "0"


def test_weights():
    assert UQ_RING.weight(Monomial((2,), 1)) == (-5,)
    assert UV_RING.weight(Monomial((1, 3), 0)) == (-2, -6)
    assert LINK2.weight(Monomial((1, 0, 0, 2), 0)) == (-2, -4, -1, 2)


def test_monomials_of_weight_against_enumeration():
    for ring in (U_RING, UQ_RING, UV_RING, LINK2):
        found = {}
        import itertools
        for exps in itertools.product(range(4), repeat=ring.nvars):
            for q in ((0, 1) if ring.has_q else (0,)):
                m = Monomial(exps, q)
                found.setdefault(ring.weight(m), set()).add(m)
        for w, ms in found.items():
            if all(x >= -4 for x in w[:2]):
                assert set(ring.monomials_of_weight(w)) == ms, (ring, w)


def test_swap_grading_and_conj():
    c = p("u^2*v + v^3", UV_RING)
    assert c.conj() == p("u*v^2 + u^3", UV_RING)
    assert UV_RING.swap_grading((1, 5)) == (5, 1)
    assert LINK2.swap_grading((1, 5, 2, 0)) == (5, 1, -2, 0)


# -- properties ---------------------------------------------------------------------

@given(mode.flatmap(lambda r: st.tuples(coefficients(r), coefficients(r), coefficients(r))))
def test_ring_axioms(abc):
    a, b, c = abc
    ring = a.ring
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * ring.zero() == 0
    assert a * ring.one() == a
    assert a + a == 0


@given(mode.flatmap(coefficients))
def test_text_round_trip(a):
    assert parse_coefficient(str(a), a.ring) == a
    assert str(parse_coefficient(str(a), a.ring)) == str(a)


@given(st.sampled_from([UV_RING, LINK2]).flatmap(lambda r: st.tuples(coefficients(r), coefficients(r))))
def test_conj_is_multiplicative_involution(ab):
    a, b = ab
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()


@given(st.lists(st.integers(0, 5), min_size=2, max_size=2), st.lists(st.integers(0, 5), min_size=2, max_size=2))
def test_collapse_multiplicative_on_diagonal(x, y):
    a = UV_RING.mono(x[0], x[0])
    b = UV_RING.mono(y[0], y[0])
    assert collapse_uv(a * b) == collapse_uv(a) * collapse_uv(b)


@given(mode.flatmap(lambda r: st.tuples(coefficients(r), coefficients(r), st.integers(0, r.nvars - 1))))
def test_derivative_leibniz(abv):
    a, b, v = abv
    assert (a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v)


@given(coefficients(UQ_RING))
def test_split_q(a):
    c0, c1 = a.split_q()
    assert c0.convert(UQ_RING) + c1.convert(UQ_RING) * UQ_RING.mono(0, q=1) == a
