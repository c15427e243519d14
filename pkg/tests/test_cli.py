import csv
import io
import json

import pytest

import cli
from exceptions import NumericFailure


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_pmf_to_stdout(capsys):
    code, out, err = run(capsys, "pmf", "--q", "1.0", "--n", "4", "--r", "0.5", "--output", "-")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "x_k", "qlog_weight", "prob", "scaled_density"]
    assert [float(row[3]) for row in rows[1:]] == pytest.approx([0.0625, 0.25, 0.375, 0.25, 0.0625], rel=1e-14)
    assert "pmf q=1.0 r=0.5 n=4" in err
    assert "peak_index=2" in err


def test_divergence_json_artifact(tmp_path, capsys):
    target = tmp_path / "divergence.json"
    code, out, _ = run(
        capsys, "divergence", "--q", "1.5", "--x", "0.3", "--r", "0.5", "--format", "json", "--output", str(target)
    )
    assert code == 0
    assert out.startswith("divergence q=1.5 r=0.5 x=0.3")
    artifact = json.loads(target.read_text(encoding="utf-8"))
    assert artifact["columns"] == ["q", "alpha", "D_q", "D_alpha", "rate"]
    q, alpha, d_q, d_alpha, rate = artifact["rows"][0]
    assert alpha == -2.0
    assert d_q == pytest.approx(0.121260, abs=5e-7)
    assert d_alpha == pytest.approx(d_q / 1.5, rel=1e-12)
    assert "output_path" not in artifact["config"]


def test_report_reproduces_summary(tmp_path, capsys):
    target = tmp_path / "stirling.json"
    code, out, _ = run(
        capsys, "stirling", "--q", "0.5", "--n-list", "10,100,1000,10000", "--format", "json", "--output", str(target)
    )
    assert code == 0
    code, reported, _ = run(capsys, "report", "--input", str(target))
    assert code == 0
    assert reported == out
    assert "refined_decay_slope=" in reported


def test_csv_file_uses_lf_line_endings(tmp_path, capsys):
    target = tmp_path / "clt.csv"
    code, _, _ = run(capsys, "clt", "--q", "1.5", "--n", "2000", "--r", "0.3", "--output", str(target))
    assert code == 0
    raw = target.read_bytes()
    assert b"\r\n" not in raw
    assert raw.splitlines()[0] == b"k,x_k,residual"


def test_invalid_q_exits_with_two(capsys):
    code, out, err = run(capsys, "pmf", "--q", "2.5", "--n", "10")
    assert code == 2
    assert out == ""
    assert "argument --q" in err


def test_unsorted_n_list(capsys):
    code, _, err = run(capsys, "ldp", "--q", "0.5", "--x", "0.3", "--n-list", "400,200")
    assert code == 2
    assert "--n-list" in err


def test_malformed_n_list(capsys):
    code, _, err = run(capsys, "stirling", "--q", "0.5", "--n-list", "10,ten")
    assert code == 2
    assert "comma-separated integers" in err


def test_missing_flag_is_an_argparse_error(capsys):
    code, _, err = run(capsys, "pmf", "--q", "0.5")
    assert code == 2
    assert "--n" in err


def test_window_too_small(capsys):
    code, _, err = run(capsys, "clt", "--q", "1.0", "--n", "10", "--window", "0.1")
    assert code == 2
    assert "grid points" in err


def test_report_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "report", "--input", str(tmp_path / "absent.json"))
    assert code == 2
    assert "--input" in err


def test_numeric_failure_writes_payload(tmp_path, capsys, monkeypatch):
    def fail(config):
        raise NumericFailure("could not bracket ln_q C_q", {"lo": -1.0, "hi": 2.0, "expansions": 200})

    monkeypatch.setattr(cli, "run_command", fail)
    target = tmp_path / "pmf.json"
    code, out, _ = run(capsys, "pmf", "--q", "0.5", "--n", "10", "--format", "json", "--output", str(target))
    assert code == 3
    assert out == ""
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert payload["type"] == "NumericFailure"
    assert payload["payload"]["expansions"] == 200


def test_repeated_runs_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for path in paths:
        code, _, _ = run(
            capsys, "ldp", "--q", "0.5", "--x", "0.3", "--n-list", "1000,2000,4000",
            "--format", "json", "--output", str(path),
        )
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_ldp_reaches_the_rate(tmp_path, capsys):
    target = tmp_path / "ldp.json"
    code, _, _ = run(
        capsys, "ldp", "--q", "0.5", "--r", "0.5", "--x", "0.3", "--n-list", "1024,4096,16384,65536",
        "--format", "json", "--output", str(target),
    )
    assert code == 0
    artifact = json.loads(target.read_text(encoding="utf-8"))
    assert artifact["config"]["mode"] == "exact"
    n, stat, target_value, abs_err = artifact["rows"][-1]
    assert n == 65536
    assert stat == pytest.approx(-0.080840, rel=0.05)
    assert abs_err == pytest.approx(abs(stat - target_value), rel=1e-12)


def test_ldp_breakdown_series_keeps_its_schema(tmp_path, capsys):
    target = tmp_path / "ldp.json"
    code, _, _ = run(
        capsys, "ldp", "--q", "1.5", "--x", "0.3", "--n-list", "1000,4000,16000",
        "--format", "json", "--output", str(target),
    )
    assert code == 0
    artifact = json.loads(target.read_text(encoding="utf-8"))
    assert artifact["columns"] == ["n", "scaled_stat", "target", "abs_err"]
    assert [row[0] for row in artifact["rows"]] == [1000, 4000, 16000]
    assert artifact["metadata"]["ldp_regime"] is False
