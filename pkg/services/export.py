"""
Artifact serialization: CSV and JSON writers, the JSON reader and the
one-line run summary.
"""
import csv
import io
from pathlib import Path
from typing import TextIO, Union

from schemas.run import Cell, CommandResult, OutputFormat


def format_cell(value: Cell) -> str:
    """Render a cell; floats use the shortest repr that round-trips."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(result: CommandResult, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_cell(value) for value in row])


def write_json(result: CommandResult, stream: TextIO) -> None:
    stream.write(result.model_dump_json(indent=2))
    stream.write("\n")


def render(result: CommandResult, fmt: OutputFormat) -> str:
    """Return the artifact text in the requested format."""
    buffer = io.StringIO(newline="")
    if fmt is OutputFormat.JSON:
        write_json(result, buffer)
    else:
        write_csv(result, buffer)
    return buffer.getvalue()


def write_artifact(result: CommandResult, fmt: OutputFormat, path: Path) -> None:
    """Write the artifact as UTF-8 with LF line endings."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(render(result, fmt))


def read_json(path: Union[str, Path]) -> CommandResult:
    with open(path, "r", encoding="utf-8") as handle:
        return CommandResult.model_validate_json(handle.read())


def summary_line(result: CommandResult) -> str:
    """
    One-line summary: command, parameters, then the summary metrics.

    Example:
        pmf q=1.0 r=0.5 n=4 mode=shift peak_probability=0.375 peak_index=2 total_probability=1.0
    """
    parts = [result.command.value]
    for key in ("q", "r", "n", "n_list", "x", "window", "mode"):
        value = result.config.get(key)
        if value is None:
            continue
        if isinstance(value, list):
            value = ",".join(str(item) for item in value)
        parts.append(f"{key}={format_cell(value)}")
    parts.extend(f"{key}={format_cell(value)}" for key, value in result.summary.items())
    return " ".join(parts)
