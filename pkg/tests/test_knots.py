import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invfloer import fixtures
from invfloer.complex import ChainMap, ComplexError, homotopy_solve, phi, psi
from invfloer.homology import localized_rank
from invfloer.knots import (IotaKComplex, collapse_to_u, link_square_target, mixed_commutator,
                            permuted, split_union, validate_iota_k)
from invfloer.linalg import Matrix
from invfloer.ring import U_RING, UV_RING

KNOTS = ["unknot.knot", "trefoil.knot", "figure_eight.knot", "figure_eight_stabilized.knot"]


def names_of(rep):
    return [c.name for c in rep.failures()]


@pytest.mark.parametrize("name", KNOTS + ["fig8_trefoil_split.knot"])
def test_fixtures_are_valid(name):
    assert validate_iota_k(fixtures.load(name)).ok


def test_trefoil_square_is_exact():
    K = fixtures.load("trefoil.knot")
    rep = validate_iota_k(K)
    assert rep.data["exact"]
    # Phi Psi vanishes here: Psi(b) = c and Phi(c) = 0
    assert phi(K.base).compose(psi(K.base)).is_zero()
    assert K.iota_k.compose(K.iota_k).matrix == Matrix.identity(UV_RING, 3)


def test_figure_eight_exact_model():
    rep = validate_iota_k(fixtures.load("figure_eight.knot"))
    assert rep.data["exact"]


def test_stabilized_figure_eight_needs_a_homotopy():
    K = fixtures.load("figure_eight_stabilized.knot")
    rep = validate_iota_k(K)
    assert not rep.data["exact"]
    h = rep.data["homotopy"]
    assert not h.is_zero()
    sq = K.iota_k.compose(K.iota_k)
    assert (sq.matrix + link_square_target(K).matrix) == h.commutator()


def test_plain_identity_is_not_an_iota_k():
    K = fixtures.load("trefoil.knot")
    bad = IotaKComplex(K.base, K.base.identity())
    assert "iota_K is skew-equivariant" in names_of(validate_iota_k(bad))


def test_grading_mismatch_is_detected():
    K = fixtures.load("trefoil.knot")
    bad_map = ChainMap(K.base, K.base, Matrix.identity(UV_RING, 3), (0, 0), True)
    rep = validate_iota_k(IotaKComplex(K.base, bad_map))
    assert "iota_K exchanges (gr_u, gr_v)" in names_of(rep)


@pytest.mark.parametrize("name", ["figure_eight.knot", "figure_eight_stabilized.knot"])
def test_phi_psi_term_is_essential_on_figure_eight(name):
    K = fixtures.load(name)
    sq = K.iota_k.compose(K.iota_k)
    assert homotopy_solve(sq, link_square_target(K)) is not None
    assert homotopy_solve(sq, K.base.identity()) is None


# -- links -------------------------------------------------------------------------

def test_split_union_matches_fixture():
    built = split_union([fixtures.load("figure_eight.knot"), fixtures.load("trefoil.knot")])
    fixture = fixtures.load("fig8_trefoil_split.knot")
    assert built.base.structurally_equal(fixture.base)
    assert built.iota_k.matrix == fixture.iota_k.matrix


def test_link_square_is_exact_on_split_union():
    rep = validate_iota_k(fixtures.load("fig8_trefoil_split.knot"))
    assert rep.ok and rep.data["exact"]


def test_link_square_target_factors():
    L = fixtures.load("fig8_trefoil_split.knot")
    base = L.base
    one = base.identity()
    f1 = one + phi(base, 1).compose(psi(base, 1))
    f2 = one + phi(base, 2).compose(psi(base, 2))
    assert link_square_target(L).matrix == f2.compose(f1).matrix
    # the two factors commute up to homotopy
    assert homotopy_solve(f1.compose(f2), f2.compose(f1)) is not None


@pytest.mark.parametrize("pair", [(1, 2), (2, 1)])
def test_mixed_commutators_are_null_homotopic(pair):
    base = fixtures.load("fig8_trefoil_split.knot").base
    m = mixed_commutator(base, *pair)
    assert m.is_chain_map()
    assert homotopy_solve(m, base.zero_map(base, m.degree)) is not None


def test_link_target_needs_two_variable_ring():
    with pytest.raises(ComplexError):
        link_square_target(fixtures.load("s1xs2.complex"))


def test_split_union_rejects_link_input():
    with pytest.raises(ComplexError):
        split_union([fixtures.load("fig8_trefoil_split.knot")])


def test_split_union_of_unknots_is_trivial():
    L = split_union([fixtures.load("unknot.knot")] * 3)
    assert L.base.n == 1 and L.components == 3
    assert validate_iota_k(L).data["exact"]


# -- reorderings and conjugation ------------------------------------------------------

@given(st.sampled_from(KNOTS + ["fig8_trefoil_split.knot"]), st.integers(0, 10_000))
def test_validation_is_stable_under_reordering(name, seed):
    K = fixtures.load(name)
    order = list(range(K.base.n))
    random.Random(seed).shuffle(order)
    P = permuted(K, order)
    rep, rep0 = validate_iota_k(P), validate_iota_k(K)
    assert rep.ok == rep0.ok and rep.data["exact"] == rep0.data["exact"]


@pytest.mark.parametrize("name", KNOTS + ["fig8_trefoil_split.knot"])
def test_conjugation_is_an_involution(name):
    K = fixtures.load(name)
    m = K.iota_k.matrix
    assert m.conj().conj() == m
    assert K.base.d.conj().conj() == K.base.d


# -- collapse to F[U] -----------------------------------------------------------------

def test_collapse_of_unknot():
    ic, rep = collapse_to_u(fixtures.load("unknot.knot"))
    assert rep.ok
    assert ic.base.n == 1 and ic.iota.matrix == Matrix.identity(U_RING, 1)


def test_collapse_of_trefoil_has_unit_coefficients():
    ic, rep = collapse_to_u(fixtures.load("trefoil.knot"))
    assert rep.ok
    assert ic.base.names() == ["a", "b", "c"]
    one = U_RING.one()
    assert ic.base.d == Matrix.from_entries(U_RING, 3, 3, [(1, 0, one), (1, 2, one)])
    assert ic.iota.matrix == Matrix.from_entries(U_RING, 3, 3, [(0, 2, one), (1, 1, one), (2, 0, one)])
    assert localized_rank(ic.base) == 1


@pytest.mark.parametrize("name", KNOTS)
def test_collapse_is_an_iota_complex(name):
    _, rep = collapse_to_u(fixtures.load(name))
    assert rep.ok


def test_collapse_needs_a_knot():
    with pytest.raises(ComplexError):
        collapse_to_u(fixtures.load("fig8_trefoil_split.knot"))
