import io as stdio
import json
import subprocess
import sys

import pytest

from invfloer import cli, fixtures, io


def run(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", fixtures.names())
def test_check_every_fixture(name):
    code, out, _ = run("check", name)
    assert code == 0
    assert out.startswith("valid ")


def test_check_messages():
    assert run("check", "trefoil.knot")[1].splitlines()[0] == "valid ι_K-complex; ι_K² = id+ΦΨ exactly"
    first = run("check", "figure_eight_stabilized.knot")[1].splitlines()[0]
    assert first.startswith("valid ι_K-complex; ι_K² = id+ΦΨ up to homotopy (")
    assert run("check", "fig8_trefoil_split.knot")[1].splitlines()[0] == \
        "valid ι_L-complex; ι_L² = Π(id+Φ_iΨ_i) exactly"


def test_check_reads_files(tmp_path):
    path = tmp_path / "t.knot"
    path.write_text(fixtures.text("trefoil.knot"))
    assert run("check", str(path))[0] == 0


def test_check_many_inputs():
    code, out, _ = run("check", "s3.iota", "unknot.knot")
    assert code == 0
    assert "== s3.iota" in out and "== unknot.knot" in out


def test_invalid_input_exits_one(tmp_path):
    bad = {"kind": "complex", "mode": "U",
           "generators": [{"name": "x", "gr": [2]}, {"name": "y", "gr": [1]}, {"name": "z", "gr": [0]}],
           "differential": [{"from": "x", "to": "y", "coeff": "1"}, {"from": "y", "to": "z", "coeff": "1"}]}
    path = tmp_path / "bad.complex"
    path.write_text(json.dumps(bad))
    code, out, _ = run("check", str(path))
    assert code == 1
    assert out.startswith("invalid complex")


def test_s1xs2_is_not_an_iota_complex(tmp_path):
    text = fixtures.text("s1xs2.complex").replace('"kind": "complex"', '"kind": "iota"')
    text = text.rstrip().rstrip("}") + ', "iota": {"entries": [{"from": "T+", "to": "T+", "coeff": "1"}, ' \
        '{"from": "T-", "to": "T-", "coeff": "1"}]}}'
    path = tmp_path / "s1xs2.iota"
    path.write_text(text)
    code, out, _ = run("check", str(path))
    assert code == 1 and out.startswith("invalid ι-complex")
    assert run("cfi", str(path))[0] == 1


def test_parse_errors_exit_two(tmp_path):
    path = tmp_path / "broken.knot"
    path.write_text(fixtures.text("trefoil.knot").replace('"to": "c", "coeff": "v"', '"to": "q", "coeff": "v"'))
    code, _, err = run("check", str(path))
    assert code == 2
    assert "missing generator 'q'" in err and "line" in err
    assert run("check", "no-such-file.knot")[0] == 2


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["homology", "s3.iota", "--delta", "0"],
    ["surgery", "unknot.knot", "--framing", "0"],
    ["surgery", "unknot.knot"],
    ["cobordism", "unknot.knot", "--framing", "3"],
    ["surgery", "unknot.knot", "--framing", "3", "--involutive"],
    ["twist", "trefoil.knot"],
    ["compress", "s3.iota"],
    ["s2xs2", "s2xs2_w1.box"],
    ["compress", "s2xs2_w1.box", "--axis-order", "0,0"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert run(*argv)[0] == 2


def test_surgery_bound_too_small_exits_one():
    code, _, err = run("surgery", "trefoil.knot", "--framing", "2", "--bound", "1")
    assert code == 1 and "below" in err


def test_internal_error_writes_bundle(tmp_path, monkeypatch):
    def boom(_):
        raise RuntimeError("synthetic failure")
    monkeypatch.setattr(cli, "twist_report", boom)
    bundle = tmp_path / "bundle"
    code, _, err = run("twist", "s3.iota", "--bundle-dir", str(bundle))
    assert code == 3
    assert "reproduction bundle" in err
    meta = json.loads((bundle / "command.json").read_text())
    assert meta["argv"][0] == "twist" and "synthetic failure" in meta["error"]
    assert (bundle / "inputs" / "0_s3.iota").read_text() == fixtures.text("s3.iota")


def test_invariant_violation_exits_three(tmp_path, monkeypatch):
    real = cli.validate_hyperbox
    calls = []

    def flaky(box):
        calls.append(box)
        rep = real(box)
        if len(calls) == 3:  # the compressed composite, after the two inputs
            rep.add("synthetic fault", False)
        return rep

    monkeypatch.setattr(cli, "validate_hyperbox", flaky)
    bundle = tmp_path / "b"
    code, _, err = run("s2xs2", "--bundle-dir", str(bundle))
    assert code == 3 and "invariant" in err
    assert "[FAIL] compressed cube satisfies the structure relation" in (bundle / "report.txt").read_text()


# -- verbs -------------------------------------------------------------------------

def test_homology_verb():
    code, out, _ = run("homology", "s1xs2.complex")
    assert code == 0
    assert out.splitlines()[0] == "H = F[U]_(1/2) + F[U]_(-1/2)"


def test_cfi_verb():
    code, out, _ = run("cfi", "trefoil_surgery2.iota")
    assert code == 0 and "2" in out.splitlines()[0]


@pytest.mark.parametrize("name", ["s3.iota", "trefoil_surgery2.iota"])
def test_twist_verb(name):
    code, out, _ = run("twist", name)
    assert code == 0
    assert out.splitlines()[0] == "Id+QΦ ≃ Id; (Id+QΦ)² = Id"


def test_s2xs2_verb():
    for order in ([], ["--axis-order", "1,0"]):
        code, out, _ = run("s2xs2", *order)
        assert code == 0
        assert out.splitlines()[0] == "composite cobordism map = Q·id"
    assert run("s2xs2", "s2xs2_w1.box", "s2xs2_w2.box")[0] == 0


def test_compress_verb():
    code, out, _ = run("compress", "s2xs2_w1.box")
    assert code == 0


def test_surgery_verb():
    code, out, _ = run("surgery", "unknot.knot", "--framing", "2", "--involutive")
    assert code == 0
    assert out.splitlines()[0] == ("X_2: 12 generators, bound 3, 2 free towers; "
                                   "self-conjugate sector [0, 1]: 4 towers, Q-rank 2")
    code, out, _ = run("surgery", "trefoil.knot", "--framing", "-3")
    assert code == 0 and "75 generators" in out and "3 free towers" in out


def test_cobordism_verb():
    code, out, _ = run("cobordism", "trefoil.knot", "--framing", "2")
    assert code == 0
    assert "chain map" in out.splitlines()[0] and "localized rank 2 of 2" in out.splitlines()[0]


# -- structured output ----------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["check", "trefoil.knot"], ["check", "s2xs2_w1.box"], ["homology", "s1xs2.complex"],
    ["cfi", "s3.iota"], ["twist", "trefoil_surgery2.iota"], ["compress", "s2xs2_w2.box"],
    ["s2xs2"], ["surgery", "unknot.knot", "--framing", "2", "--involutive"],
    ["cobordism", "unknot.knot", "--framing", "2"],
])
def test_structured_output_is_deterministic_json(argv):
    code, out1, _ = run(*argv, "--format", "structured")
    _, out2, _ = run(*argv, "--format", "structured")
    assert code == 0 and out1 == out2
    doc = json.loads(out1)
    assert "report" in doc or doc.get("kind") == "batch"


@pytest.mark.parametrize("argv", [
    ["check", "trefoil.knot"], ["check", "s2xs2_w1.box"], ["cfi", "s3.iota"],
    ["twist", "trefoil_surgery2.iota"], ["compress", "s2xs2_w2.box"], ["s2xs2"],
])
def test_structured_output_reparses(argv):
    _, out, _ = run(*argv, "--format", "structured")
    value = io.loads(out)
    assert io.loads(io.serialize(value)) is not None


def test_structured_check_round_trips_the_input():
    _, out, _ = run("check", "figure_eight.knot", "--format", "structured")
    assert io.serialize(io.loads(out)) == io.serialize(fixtures.load("figure_eight.knot"))


def test_text_output_is_deterministic():
    assert run("surgery", "trefoil.knot", "--framing", "2") == run("surgery", "trefoil.knot", "--framing", "2")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "invfloer.cli", "twist", "s3.iota"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("Id+QΦ ≃ Id")
