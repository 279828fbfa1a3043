import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invfloer import fixtures, io
from invfloer.complex import FreeComplex
from invfloer.hypercube import Hyperbox
from invfloer.involutive import IotaComplex
from invfloer.knots import IotaKComplex
from invfloer.random_gen import random_chain_map, random_complex, random_hyperbox, random_iota_complex

TREFOIL = fixtures.text("trefoil.knot")


def same(a, b) -> bool:
    return io.serialize(a) == io.serialize(b)


@pytest.mark.parametrize("name", fixtures.names())
def test_fixture_round_trip(name):
    obj = fixtures.load(name)
    text = io.serialize(obj)
    again = io.loads(text)
    assert type(again) is type(obj)
    assert io.serialize(again) == text


def test_fixture_kinds():
    kinds = {name: type(fixtures.load(name)) for name in fixtures.names()}
    assert kinds["s3.iota"] is IotaComplex
    assert kinds["trefoil.knot"] is IotaKComplex
    assert kinds["s1xs2.complex"] is FreeComplex
    assert kinds["s2xs2_w1.box"] is Hyperbox


def test_knot_round_trip_preserves_structure():
    K = fixtures.load("trefoil.knot")
    again = io.loads(io.serialize(K))
    assert again.base == K.base
    assert again.iota_k.matrix == K.iota_k.matrix and again.iota_k.skew


@given(st.integers(0, 10_000))
def test_random_complexes_round_trip(seed):
    rng = random.Random(seed)
    c = random_complex(rng, 8)
    assert io.loads(io.serialize(c)) == c
    f = random_chain_map(rng, c, random_complex(rng, 6))
    g = io.loads(io.serialize(f))
    assert g.matrix == f.matrix and g.degree == f.degree
    ic = random_iota_complex(rng, 5)
    assert same(io.loads(io.serialize(ic)), ic)


def test_random_hyperboxes_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        H = random_hyperbox(rng, max_dim=2, max_side=2, max_cell_gens=4)
        back = io.loads(io.serialize(H))
        assert back.size == H.size
        assert same(back, H)


def test_save_and_load(tmp_path):
    K = fixtures.load("figure_eight.knot")
    path = tmp_path / "k.knot"
    io.save(K, path)
    assert same(io.load(path), K)


def test_fraction_gradings_are_strings():
    d = json.loads(io.serialize(fixtures.load("s1xs2.complex")))
    assert d["generators"][0]["gr"] == ["1/2"]


# -- errors -------------------------------------------------------------------------

def test_missing_generator_has_a_location():
    bad = TREFOIL.replace('{"from": "b", "to": "c", "coeff": "v"}', '{"from": "b", "to": "z", "coeff": "v"}')
    with pytest.raises(io.ParseError) as err:
        io.loads(bad)
    e = err.value
    assert "missing generator 'z'" in e.message
    line = bad.splitlines()[e.line - 1]
    assert line[e.column - 1:].startswith('"to": "z"')


def test_alexander_inconsistency():
    bad = TREFOIL.replace('"alexander": {"a": 1', '"alexander": {"a": 2')
    with pytest.raises(io.ParseError, match="grading inconsistency"):
        io.loads(bad)


def test_bad_coefficient():
    bad = TREFOIL.replace('"coeff": "v"', '"coeff": "w^2"')
    with pytest.raises(io.ParseError, match="bad coefficient") as err:
        io.loads(bad)
    assert err.value.line is not None


def test_json_syntax_error_location():
    with pytest.raises(io.ParseError) as err:
        io.loads('{"kind": "complex",\n "mode": "U",\n "generators": [}')
    assert err.value.line == 3


@pytest.mark.parametrize("text,message", [
    ('[]', "top level"),
    ('{"kind": "complex"}', "missing field 'mode'"),
    ('{"kind": "thing", "mode": "U"}', "unknown kind"),
    ('{"mode": "W", "generators": []}', "unknown ring mode"),
    ('{"mode": "U", "generators": [{"name": "x", "gr": [0]}, {"name": "x", "gr": [1]}]}', "duplicate"),
    ('{"mode": "U", "generators": [{"name": "x", "gr": "1/0"}]}', "bad grading"),
    ('{"mode": "UV", "generators": [{"name": "x", "gr": [0]}]}', "needs 2 grading entries"),
    ('{"mode": "U", "generators": [{"name": "x", "gr": [0]}], "differential": {}}', "must be a list"),
])
def test_malformed_documents(text, message):
    with pytest.raises(io.ParseError, match=message):
        io.loads(text)


def test_bad_equivariance():
    bad = TREFOIL.replace('"equivariance": "skew"', '"equivariance": "twisted"')
    with pytest.raises(io.ParseError, match="equivariance"):
        io.loads(bad)


def test_hyperbox_with_missing_cell():
    text = fixtures.text("s2xs2_w1.box").replace('"from": [0, 1], "to": [1, 1]', '"from": [0, 2], "to": [1, 1]')
    with pytest.raises(io.ParseError, match="missing cell"):
        io.loads(text)
