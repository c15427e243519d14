import io

from schemas.run import Command, CommandResult, OutputFormat
from services.export import format_cell, read_json, render, summary_line, write_artifact, write_csv


def sample() -> CommandResult:
    return CommandResult(
        command=Command.LDP,
        config={"q": 0.5, "r": 0.5, "n": None, "n_list": [100, 200], "x": 0.3, "window": None, "mode": "shift"},
        columns=["n", "scaled_stat", "target", "abs_err"],
        rows=[[100, -0.1, -0.08084, 0.01916], [200, -0.09, -0.08084, 0.00916]],
        summary={"abs_err": 0.00916, "rel_err": None, "error_nonincreasing": True},
    )


def test_format_cell():
    assert format_cell(0.1) == "0.1"
    assert format_cell(1e-300) == "1e-300"
    assert format_cell(True) == "true"
    assert format_cell(None) == ""
    assert format_cell(7) == "7"


def test_csv_layout():
    buffer = io.StringIO(newline="")
    write_csv(sample(), buffer)
    assert buffer.getvalue() == "n,scaled_stat,target,abs_err\n100,-0.1,-0.08084,0.01916\n200,-0.09,-0.08084,0.00916\n"


def test_summary_line():
    line = summary_line(sample())
    assert line == "ldp q=0.5 r=0.5 n_list=100,200 x=0.3 mode=shift abs_err=0.00916 rel_err= error_nonincreasing=true"


def test_json_artifact_reads_back(tmp_path):
    target = tmp_path / "ldp.json"
    write_artifact(sample(), OutputFormat.JSON, target)
    assert read_json(target) == sample()
    assert render(sample(), OutputFormat.JSON).endswith("}\n")
