"""Command-line client behavior and exit codes."""
import json
import math

import pytest

from mureach.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gradient_success(capsys):
    code, out, _ = run(capsys, "gradient", "parabola:2", "0,1")
    assert code == 0
    data = json.loads(out)
    assert data["grad_norm"] == pytest.approx(1.0 / math.sqrt(3.0),
                                              abs=1e-12)
    assert data["distance"] == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-12)
    assert len(data["projections"]) == 2


def test_gradient_output_is_deterministic(capsys):
    _, out1, _ = run(capsys, "gradient", "parabola:2", "0.3,1.7")
    _, out2, _ = run(capsys, "gradient", "parabola:2", "0.3,1.7")
    assert out1 == out2


def test_on_shape_point_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gradient", "parabola:2", "0,0"])
    assert exc.value.code == 2
    assert "error" in capsys.readouterr().err


def test_bad_spec_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gradient", "nosuch:1", "0,1"])
    assert exc.value.code == 1


def test_malformed_point_exits_1(capsys):
    assert main(["gradient", "parabola:2", "zero,one"]) == 1
    assert "malformed point" in capsys.readouterr().err


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1


def test_oracle_writes_csv(tmp_path, capsys):
    out = tmp_path / "oracle.csv"
    code = main(["oracle", "0.5", "0.5", "1", "3", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t,d,chi,v,one_minus_chi_sq,asymptotic_gap"
    assert len(lines) == 4


def test_critical_then_fit(tmp_path, capsys):
    csv_path = tmp_path / "chi.csv"
    code = main(["critical", "calpha:0.5:8", "0.001", "0.1", "20", "axis",
                 str(csv_path)])
    assert code == 0
    assert csv_path.read_text().startswith("d,chi,one_minus_chi_sq")
    code, out, _ = run(capsys, "fit", str(csv_path), "0.001", "0.1")
    assert code == 0
    data = json.loads(out)
    # the half-power curve has exponent 2 and constant (3/2)^4
    assert data["exponent"] == pytest.approx(2.0, abs=0.05)
    assert data["constant"] == pytest.approx(5.0625, rel=0.15)
    assert data["r2"] > 0.999


def test_fit_missing_file_exits_1(capsys):
    assert main(["fit", "/no/such/file.csv", "0.01", "0.1"]) == 1


def test_mu_reach_cli(capsys):
    code, out, _ = run(capsys, "mu-reach", "calpha:0.5:8", "0.9", "0.5",
                       "axis")
    assert code == 0
    data = json.loads(out)
    assert data["mu_reach"] > 0
    assert data["censored"] in (True, False)


def test_config_file_overrides_bins(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("bins = 6  # fewer bins\n")
    csv_path = tmp_path / "chi.csv"
    code = main(["--config", str(cfg), "mu-reach", "calpha:0.5:8", "0.9",
                 "0.5", "axis"])
    assert code == 0
    code = main(["critical", "calpha:0.5:8", "0.01", "0.1", "4", "axis",
                 str(csv_path)])
    assert code == 0
    assert len(csv_path.read_text().strip().split("\n")) == 5


def test_stdout_output_with_dash(capsys):
    code, out, _ = run(capsys, "oracle", "0.5", "0.5", "1", "3", "-")
    assert code == 0
    assert out.startswith("t,d,chi,v")
