"""Command-line interface: payload shapes, exit codes, determinism."""

import json

import pytest

from macfock import cli


def _run(capsys, argv):
    rc = cli.main(argv)
    out = capsys.readouterr().out
    return rc, out


def _run_json(capsys, argv):
    rc, out = _run(capsys, argv)
    return rc, json.loads(out)


def test_compute_P_pinned_coefficient(capsys):
    rc, payload = _run_json(capsys, ["compute", "P", "--lambda", "2",
                                     "--basis", "m"])
    assert rc == 0
    assert payload["family"] == "P"
    assert payload["lambda"] == [2]
    rows = {tuple(r["partition"]): r["value"]
            for r in payload["coefficients"]}
    assert rows[(2,)] == "1"
    assert rows[(1, 1)] == "(q*t-q+t-1)/(q*t-1)"


def test_compute_norm(capsys):
    rc, payload = _run_json(capsys, ["compute", "norm", "--lambda", "1"])
    assert rc == 0
    assert payload["value"] == "(q-1)/(t-1)"


def test_text_format(capsys):
    rc, out = _run(capsys, ["compute", "P", "--lambda", "2",
                            "--format", "text"])
    assert rc == 0
    assert "(q*t-q+t-1)/(q*t-1)" in out
    assert "{" not in out


def test_expect_both_routes(capsys):
    rc, payload = _run_json(capsys, ["expect", "--obs", "hatE1",
                                     "--method", "both", "--xvars", "1",
                                     "--yvars", "1", "--degree", "2"])
    assert rc == 0
    assert payload["equal"] is True
    assert payload["direct"] == payload["operator"]


def test_expect_rejects_unknown_observable(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["expect", "--obs", "bogus", "--degree", "2"])
    assert exc.value.code == 2


def test_fredholm(capsys):
    rc, payload = _run_json(capsys, ["fredholm", "--kernel", "KE",
                                     "--degree", "2", "--uorder", "2"])
    assert rc == 0
    assert payload["equal"] is True
    assert all(row["equal"] for row in payload["coefficients"])


def test_dim_eigenvalue(capsys):
    rc, payload = _run_json(capsys, ["dim", "eigenvalue", "--tuple", "1|0"])
    assert rc == 0
    assert payload["value"] == "(q*t-q+t+1)/(t)"


def test_dim_singular_label_reports_cleanly(capsys):
    rc, payload = _run_json(capsys, ["dim", "P", "--tuple", "1|0"])
    assert rc == 0
    assert payload["singular"] is True
    assert "Jordan" in payload["detail"]


def test_dim_solvable_label(capsys):
    rc, payload = _run_json(capsys, ["dim", "P", "--tuple", "0|1"])
    assert rc == 0
    assert "singular" not in payload
    rows = {tuple(tuple(p) for p in r["tuple"]): r["value"]
            for r in payload["coefficients"]}
    assert rows == {((1,), ()): "1"} or rows == {((), (1,)): "1"}


def test_dim_requires_tuple(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["dim", "P"])
    assert exc.value.code == 2


def test_dim_moment(capsys):
    rc, payload = _run_json(capsys, ["dim", "moment", "--levels", "2",
                                     "--degree", "2"])
    assert rc == 0
    assert payload["equal"] is True
    assert payload["matching"] == ["exchange_derived"]


def test_verify_cauchy_flags(capsys):
    rc, payload = _run_json(capsys, ["verify", "cauchy", "--degree", "4",
                                     "--xvars", "1", "--yvars", "2"])
    assert rc == 0
    assert payload["ok"] is True
    assert payload["degree"] == 4
    assert payload["xvars"] == 1
    assert payload["yvars"] == 2


def test_verify_flags_rejected_elsewhere(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "basis", "--degree", "4"])
    assert exc.value.code == 2


def test_verify_output_is_deterministic(capsys):
    argv = ["verify", "cauchy", "--quick"]
    rc1, out1 = _run(capsys, argv)
    rc2, out2 = _run(capsys, argv)
    assert rc1 == rc2 == 0
    assert out1 == out2
