import json
import math

import numpy as np
import pytest

from frhankel.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    EXIT_VERIFY,
    TOL_ENV,
    main,
    parse_angle,
    parse_function,
    read_csv,
    write_csv,
)
from frhankel.errors import ValidationError
from frhankel.model import make_params


def _run(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    rc = main(args + ["--output", str(out)])
    return rc, out


def test_transform_classical_gaussian(tmp_path):
    rc, out = _run(["transform", "--nu", "0", "--mu", "0", "--theta", "1.5707963",
                    "--fn", "gauss:p=0.5", "--grid", "0.1:4:64"], tmp_path)
    assert rc == EXIT_OK
    header, data = read_csv(str(out))
    assert header == ["omega", "re", "im"]
    w = np.linspace(0.1, 4, 64)
    np.testing.assert_allclose(data[:, 0], w, rtol=1e-15)
    np.testing.assert_allclose(data[:, 1], np.exp(-w**2 / 2), atol=1e-7)
    near_one = np.interp(1.0, data[:, 0], data[:, 1])
    assert near_one == pytest.approx(0.6065307, abs=2e-3)  # interpolated between nodes
    report = json.loads(out.with_name("out.csv.json").read_text())
    assert report["params"]["nu"] == 0.0 and report["grid"]["n"] == 64
    assert report["max_error_estimate"] >= 0
    assert report["oracle_max_relative_error"] <= 1e-8


def test_transform_exact_node(tmp_path):
    rc, out = _run(["transform", "--theta", "pi/2", "--fn", "gauss", "--grid", "0.5:1.5:3"],
                   tmp_path)
    assert rc == EXIT_OK
    _, data = read_csv(str(out))
    assert data[1, 0] == 1.0 and data[1, 1] == pytest.approx(0.6065307, abs=1e-7)


def test_identity_returns_input_columns(tmp_path):
    src = tmp_path / "in.csv"
    t = np.linspace(0.1, 2, 7)
    write_csv(str(src), ["t", "re", "im"], [t, np.exp(-t), np.sin(t)])
    rc, out = _run(["transform", "--theta", "3.14159265358979", "--input", str(src),
                    "--grid", "0.1:2:7"], tmp_path)
    assert rc == EXIT_OK
    _, data = read_csv(str(out))
    _, orig = read_csv(str(src))
    np.testing.assert_array_equal(data, orig)


def test_validation_exit_codes(tmp_path, capsys):
    assert _run(["transform", "--nu", "-0.75", "--fn", "gauss", "--grid", "0.1:4:8"],
                tmp_path)[0] == EXIT_VALIDATION
    assert "error" in capsys.readouterr().err
    assert _run(["transform", "--fn", "gauss", "--grid", "4:0.1:8"], tmp_path)[0] == EXIT_VALIDATION
    assert _run(["transform", "--fn", "gauss"], tmp_path)[0] == EXIT_VALIDATION
    assert _run(["transform", "--fn", "bessel", "--grid", "0.1:4:8"], tmp_path)[0] == EXIT_VALIDATION
    assert _run(["transform", "--fn", "gauss:p=0", "--grid", "0.1:4:8"],
                tmp_path)[0] == EXIT_VALIDATION
    assert _run(["transform", "--fn", "gauss:s=-3", "--grid", "0.1:4:8"],
                tmp_path)[0] == EXIT_VALIDATION
    assert _run(["transform", "--input", str(tmp_path / "missing.csv"), "--grid", "0.1:4:8"],
                tmp_path)[0] == EXIT_VALIDATION
    with pytest.raises(SystemExit) as err:
        main(["transform", "--nu", "abc"])
    assert err.value.code == 2


def test_numerical_exit_code(tmp_path):
    rc, _ = _run(["transform", "--theta", "pi/3", "--fn", "gauss:p=1e-6", "--grid", "0.5:4:4"],
                 tmp_path)
    assert rc == EXIT_NUMERICAL


def test_csv_round_trip_full_precision(tmp_path):
    rng = np.random.default_rng(3)
    cols = [rng.standard_normal(20) * 10.0 ** rng.integers(-300, 300, 20) for _ in range(3)]
    path = tmp_path / "r.csv"
    write_csv(str(path), ["a", "b", "c"], cols)
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    header, data = read_csv(str(path))
    assert header == ["a", "b", "c"]
    for j in range(3):
        assert np.array_equal(data[:, j], cols[j])


def test_inverse_and_roundtrip(tmp_path):
    rc, out = _run(["inverse", "--nu", "0.5", "--theta", "pi/4", "--fn", "oracle:p=1",
                    "--grid", "0.2:4:12"], tmp_path)
    assert rc == EXIT_OK
    assert json.loads(out.with_name("out.csv.json").read_text())["oracle_max_relative_error"] <= 1e-8
    rc, out = _run(["roundtrip", "--nu", "0.5", "--mu", "0.25", "--theta", "pi/3",
                    "--fn", "oracle", "--grid", "0.2:4:10"], tmp_path, "rt.csv")
    assert rc == EXIT_OK
    report = json.loads(out.with_name("rt.csv.json").read_text())
    assert report["max_relative_error"] <= 1e-6


def test_tolerance_env(tmp_path, monkeypatch):
    monkeypatch.setenv(TOL_ENV, "1e-6")
    rc, out = _run(["transform", "--fn", "gauss", "--grid", "0.5:2:3"], tmp_path)
    assert rc == EXIT_OK
    assert json.loads(out.with_name("out.csv.json").read_text())["quadrature"]["rel_tol"] == 1e-6
    monkeypatch.setenv(TOL_ENV, "tight")
    assert _run(["transform", "--fn", "gauss", "--grid", "0.5:2:3"], tmp_path)[0] == EXIT_VALIDATION


def test_threads_do_not_change_output(tmp_path):
    args = ["transform", "--nu", "0.5", "--theta", "pi/3", "--fn", "oracle", "--grid", "0.1:4:150"]
    _, one = _run(args + ["--threads", "1"], tmp_path, "one.csv")
    _, three = _run(args + ["--threads", "3"], tmp_path, "three.csv")
    assert one.read_bytes() == three.read_bytes()


def test_parseval_json(tmp_path):
    path = tmp_path / "p.json"
    assert main(["parseval", "--theta", "pi/3", "--fn", "gauss", "--fn2", "gauss:s=2,p=1",
                 "--json-report", str(path)]) == EXIT_OK
    assert json.loads(path.read_text())["defect"] <= 1e-7


def test_cwt_both_paths(tmp_path):
    rc, out = _run(["cwt", "--fn", "gauss", "--psi", "gauss:p=1", "--b-grid", "0.25:2:4",
                    "--a", "0.5,1,2", "--path", "both"], tmp_path)
    assert rc == EXIT_OK
    header, data = read_csv(str(out))
    assert header == ["b", "a", "re", "im", "re_direct", "im_direct", "defect"]
    assert data.shape == (12, 7)
    assert np.all(data[:, -1] <= 1e-3)


def test_cwt_errors(tmp_path, capsys):
    assert _run(["cwt", "--a", ""], tmp_path)[0] == EXIT_VALIDATION
    rc, _ = _run(["cwt", "--theta", "pi", "--path", "spectral"], tmp_path)
    assert rc == EXIT_VALIDATION
    assert "distributional" in capsys.readouterr().err


def test_seminorms(tmp_path):
    rc, out = _run(["seminorms", "--fn", "gauss", "--k-max", "12", "--q-max", "2", "--sign", "+"],
                   tmp_path)
    assert rc == EXIT_OK
    header, data = read_csv(str(out))
    assert header == ["sign", "k", "q", "S"]
    row = data[(data[:, 1] == 4) & (data[:, 2] == 0)][0]
    assert row[3] == pytest.approx((4 / math.e) ** 2, rel=1e-10)
    fits = json.loads(out.with_name("out.csv.json").read_text())["fits"]
    assert abs(fits["1"]["k"]["alpha"] - 0.5) <= 0.05


def test_check_sequence(tmp_path, capsys):
    assert main(["check-sequence", "--seq", "factorial_pow:2"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["axiom1"] and rep["axiom2"] and rep["shift_bound"] and rep["axiom5"]["converges"]
    assert main(["check-sequence", "--seq", "const:0"]) == EXIT_VALIDATION


def test_verify_pass_and_fail(tmp_path, capsys):
    path = tmp_path / "v.json"
    assert main(["verify", "ineq119", "--output", str(path)]) == EXIT_OK
    rep = json.loads(path.read_text())
    assert rep["passed"] and len(rep["cases"]) == 12**3
    assert main(["verify", "sequences", "--seq", "factorial_pow:2"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["summary"]["reports"]["factorial_pow:2"]["axiom5"]["converges"]
    assert main(["verify", "sequences", "--seq", "factorial_pow:1"]) == EXIT_VERIFY
    assert "FAIL" in capsys.readouterr().err


def test_verify_roundtrip(tmp_path):
    path = tmp_path / "rt.json"
    assert main(["verify", "roundtrip", "--output", str(path)]) == EXIT_OK
    rep = json.loads(path.read_text())
    assert max(c["value"] for c in rep["cases"]) <= 1e-6


def test_parse_helpers():
    assert parse_angle("pi/3") == math.pi / 3
    assert parse_angle("2pi/3") == 2 * math.pi / 3
    assert parse_angle("pi") == math.pi
    assert parse_angle("0.25") == 0.25
    assert make_params(0, 0, parse_angle("pi/2")).kind.value == "classical"
    with pytest.raises(ValidationError):
        parse_angle("tau")
    P = make_params(0.5, 0.25, math.pi / 3)
    f = parse_function("oracle+gauss:s=2,p=1,amp=2j", P)
    assert len(f.terms) == 2
    assert f.terms[0].power == 0.25 and f.terms[0].chirp == pytest.approx(-P.cot)
    assert f.terms[1].amplitude == 2j
    assert parse_function("zero", P).is_zero
    with pytest.raises(ValidationError):
        parse_function("gauss:q=1", P)
