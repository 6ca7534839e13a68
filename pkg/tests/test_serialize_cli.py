import json

import numpy as np
import pytest

from covspec import serialize as ser
from covspec.classify import classify_spectrum
from covspec.cli import main
from covspec.errors import ValidationError
from covspec.pairing import classify_pairing, diagonal_representative
from covspec.sampling import haar_orthogonal
from covspec.witness import prop1_alternative_cm, thm1_violation_witness

from conftest import squeezed_pair

PROP1_EXAMPLE = squeezed_pair(1.2, 1.0) + squeezed_pair(1.1, 0.1)


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# --- serialization ---------------------------------------------------------

def test_float_round_trip_is_exact():
    M = haar_orthogonal(6, 3) * np.pi
    back = ser.matrix_from_json(ser.loads(ser.dumps(ser.matrix_to_json(M))))
    assert np.array_equal(back, M)


def test_matrix_ordering_conversion():
    G = np.diag([1.0, 2.0, 3.0, 4.0])  # interleaved q1 p1 q2 p2
    blocked = {"S": 2, "ordering": "qqpp", "entries": np.diag([1.0, 3.0, 2.0, 4.0]).tolist()}
    np.testing.assert_array_equal(ser.matrix_from_json(blocked), G)
    assert ser.matrix_to_json(G)["ordering"] == "qpqp"
    np.testing.assert_array_equal(ser.matrix_from_json(G.tolist()), G)


@pytest.mark.parametrize("obj", [
    {"S": 2, "entries": [[1.0, 0.0], [0.0, 1.0]]},
    {"entries": [[1.0, 0.0, 0.0]]},
    {"S": 1, "ordering": "xyz", "entries": [[1.0, 0.0], [0.0, 1.0]]},
    {"rows": []},
])
def test_bad_matrix_json(obj):
    with pytest.raises(ValidationError):
        ser.matrix_from_json(obj)


def test_bad_spectrum_json():
    with pytest.raises(ValidationError):
        ser.spectrum_from_json({"values": [1.0, -2.0]})
    with pytest.raises(ValidationError):
        ser.spectrum_from_json([1.0])


def test_malformed_text_reports_position():
    with pytest.raises(ValidationError, match="line 1 column"):
        ser.loads("[4, 2,")


def test_reports_validate_against_their_schemas():
    lam = ser.spectrum_from_json([4, 2, 0.5, 0.25])
    ser.validate("spectrum", ser.spectrum_to_json(lam))
    ser.validate("pairing_report", ser.pairing_to_json(classify_pairing(lam)))
    ser.validate("verdict", ser.verdict_to_json(classify_spectrum(lam)))
    ser.validate("decomposition", ser.decomposition_to_json(diagonal_representative(lam)))
    ser.validate("witness", ser.witness_to_json(thm1_violation_witness(lam, haar_orthogonal(4, 0))))
    ser.validate("witness", ser.witness_to_json(prop1_alternative_cm(PROP1_EXAMPLE)))
    with pytest.raises(ValidationError):
        ser.validate("witness", {"kind": "violation", "checks": {}})
    with pytest.raises(ValidationError):
        ser.validate("nonsense", {})


# --- CLI -------------------------------------------------------------------

def test_classify_example(capsys):
    code, out, _ = _run(capsys, ["classify", "--spectrum", "[4,2,0.5,0.25]"])
    rep = json.loads(out)
    assert code == 0
    assert (rep["p1"], rep["p2"], rep["reason"]) == ("in", "in", "SMinus1Pure")
    ser.validate("verdict", rep)


def test_decompose_identity(tmp_path, capsys):
    path = tmp_path / "id4.json"
    path.write_text(json.dumps({"S": 2, "ordering": "qpqp", "entries": np.eye(4).tolist()}))
    code, out, _ = _run(capsys, ["decompose", "--matrix", str(path)])
    rep = json.loads(out)
    assert code == 0
    np.testing.assert_allclose(rep["nu"], [1, 1], atol=1e-12)
    np.testing.assert_allclose(rep["r"], [0, 0], atol=1e-12)
    ser.validate("decomposition", rep)


def test_witness_prop1_example(tmp_path, capsys):
    path = tmp_path / "prop1_example.json"
    path.write_text(json.dumps({"values": PROP1_EXAMPLE}))
    code, out, _ = _run(capsys, ["witness", "--spectrum", str(path), "--seed", "7"])
    rep = json.loads(out)
    assert code == 0
    assert rep["kind"] == "alternative"
    assert all(v for v in rep["checks"].values() if isinstance(v, bool))
    ser.validate("witness", rep)


def test_witness_violation_and_trivial(capsys, tmp_path):
    code, out, _ = _run(capsys, ["witness", "--spectrum", "[4,2,0.5,0.25]", "--seed", "1"])
    assert code == 0 and json.loads(out)["kind"] == "violation"
    path = tmp_path / "eye.json"
    path.write_text(json.dumps(np.eye(4).tolist()))
    code, out, _ = _run(capsys, ["witness", "--spectrum", "[4,2,0.5,0.25]", "--matrix", str(path)])
    assert code == 0 and json.loads(out)["kind"] == "trivial"


def test_witness_without_construction_is_invalid(capsys):
    code, _, err = _run(capsys, ["witness", "--spectrum", "[3,2,1.5,1]"])
    assert code == 2
    assert "no witness" in err


def test_malformed_json_exit_code(capsys):
    code, _, err = _run(capsys, ["classify", "--spectrum", "[4, 2,"])
    assert code == 2
    assert "column" in err


def test_fail_on_negative(capsys):
    argv = ["classify", "--spectrum", json.dumps(PROP1_EXAMPLE)]
    assert _run(capsys, argv)[0] == 0
    assert _run(capsys, argv + ["--fail-on-negative"])[0] == 1


def test_tolerance_sensitive_verdict_exit_code(capsys):
    argv = ["classify", "--spectrum", "[4,2,0.5,0.2500000001]"]
    code, out, _ = _run(capsys, argv)
    assert code == 3
    assert json.loads(out)["tolerance_sensitive"] is True
    assert _run(capsys, argv + ["--tol-pure", "1e-3"])[0] == 0


def test_deterministic_output_is_byte_identical(capsys):
    argv = ["sample", "--target", "Case2", "-S", "3", "--count", "3", "--with-matrix", "--seed", "4",
            "--deterministic"]
    first = _run(capsys, argv)[1]
    assert first == _run(capsys, argv)[1]
    rows = [json.loads(line) for line in first.splitlines()]
    assert [r["index"] for r in rows] == [0, 1, 2]
    for r in rows:
        ser.validate("spectrum", r["spectrum"])
        ser.validate("matrix", r["matrix"])
    w = ["witness", "--spectrum", "[4,2,0.5,0.25]", "--deterministic"]
    assert _run(capsys, w)[1] == _run(capsys, w)[1]
    assert "timestamp" not in json.loads(_run(capsys, w)[1])


def test_timestamp_present_by_default(capsys):
    rep = json.loads(_run(capsys, ["classify", "--spectrum", "[1,1]"])[1])
    assert "timestamp" in rep and rep["version"]


def test_out_file(tmp_path, capsys):
    path = tmp_path / "rep.json"
    code, out, _ = _run(capsys, ["classify", "--spectrum", "[4,2,0.5,0.25]", "--out", str(path)])
    assert code == 0 and out == ""
    ser.validate("verdict", json.loads(path.read_text()))


def test_config_file(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {"pure_pair_tol": 1e-3}, "seed": 3}))
    monkeypatch.setenv("COVSPEC_CONFIG", str(cfg))
    assert _run(capsys, ["classify", "--spectrum", "[4,2,0.5,0.2500000001]"])[0] == 0
    w = ["witness", "--spectrum", "[4,2,0.5,0.25]", "--deterministic"]
    assert _run(capsys, w)[1] == _run(capsys, w + ["--seed", "3"])[1]
    cfg.write_text(json.dumps({"tolerances": {"no_such_tol": 1.0}}))
    assert _run(capsys, ["classify", "--spectrum", "[1,1]"])[0] == 2


def test_sampling_exhaustion_exit_code(capsys):
    argv = ["sample", "--target", "Case3", "-S", "1", "--max-rejections", "5"]
    assert _run(capsys, argv)[0] == 3


def test_verify_small_scale(capsys):
    code, out, _ = _run(capsys, ["verify", "--scale", "0.02"])
    assert code == 0
    assert out.count("[PASS]") == 9
