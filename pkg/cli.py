"""
Command-line front end.

    python cli.py pmf --q 1.0 --n 4 --r 0.5
    python cli.py ldp --q 0.5 --r 0.5 --x 0.3 --n-list 1024,4096,16384,65536
    python cli.py collapse --q 1.5 --r 0.5 --n-list 50000,500000 --window 3 --format json --output collapse.json
    python cli.py report --input collapse.json

Exit status: 0 success, 2 invalid arguments, 3 numeric failure.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import ujson
from pydantic import ValidationError

from config import LOG_LEVEL
from exceptions import InvalidParameterError, NumericFailure
from schemas.distribution import NormalizationMode
from schemas.run import FLAG_NAMES, Command, OutputFormat, RunConfig
from services.export import read_json, render, summary_line, write_artifact
from services.runner import run_command, summarize

logger = logging.getLogger("qdeform.cli")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3


def int_list(text: str) -> List[int]:
    """Parse a comma-separated list of integers such as '1024,4096'."""
    try:
        values = [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def output_path(text: str) -> Optional[Path]:
    return None if text == "-" else Path(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdeform",
        description="q-deformed binomial distributions and their limit theorems",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=LOG_LEVEL.upper(),
        help="stderr log level (default: %(default)s)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--q", type=float, required=True, help="deformation index in (0, 2)")
        sub.add_argument("--r", type=float, default=0.5, help="success parameter in (0, 1)")
        sub.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value)
        sub.add_argument("--output", type=output_path, default=None, help="artifact path, '-' for stdout")
        return sub

    def add_mode(sub: argparse.ArgumentParser) -> None:
        sub.add_argument(
            "--mode",
            choices=[m.value for m in NormalizationMode],
            default=None,
            help="normalization (default: exact for ldp, shift otherwise)",
        )

    pmf = add("pmf", "probability mass function")
    pmf.add_argument("--n", type=int, required=True)
    add_mode(pmf)

    stirling = add("stirling", "q-Stirling approximations against the exact q-factorial")
    stirling.add_argument("--n-list", type=int_list, required=True)

    divergence = add("divergence", "q- and alpha-divergence of (x, 1-x) from (r, 1-r) and the rate function")
    divergence.add_argument("--x", type=float, required=True)

    ldp = add("ldp", "scaled q-log tail against the large-deviation rate")
    ldp.add_argument("--x", type=float, required=True)
    ldp.add_argument("--n-list", type=int_list, required=True)
    ldp.add_argument("--workers", type=int, default=1)
    add_mode(ldp)

    clt = add("clt", "q-log residuals of the local limit theorem")
    clt.add_argument("--n", type=int, required=True)
    clt.add_argument("--window", "--L", dest="window", type=float, default=None)
    add_mode(clt)

    collapse = add("collapse", "scaled densities and q-Gaussian fits over several n")
    collapse.add_argument("--n-list", type=int_list, default=None)
    collapse.add_argument("--window", type=float, default=None)
    collapse.add_argument("--workers", type=int, default=1)
    add_mode(collapse)

    report = commands.add_parser("report", help="re-read a JSON artifact and print its summary")
    report.add_argument("--input", type=Path, required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {
        "command": args.command,
        "q": getattr(args, "q", None),
        "r": getattr(args, "r", 0.5),
        "n": getattr(args, "n", None),
        "n_list": getattr(args, "n_list", None),
        "x": getattr(args, "x", None),
        "window": getattr(args, "window", None),
        "mode": getattr(args, "mode", None),
        "output_path": getattr(args, "output", None),
        "format": getattr(args, "format", OutputFormat.CSV.value),
        "input_path": getattr(args, "input", None),
        "workers": getattr(args, "workers", 1),
    }
    return RunConfig(**values)


def describe_validation_error(exc: ValidationError) -> str:
    messages = []
    for error in exc.errors():
        field = error["loc"][0] if error["loc"] else None
        flag = FLAG_NAMES.get(field, "arguments") if field else "arguments"
        messages.append(f"argument {flag}: {error['msg']}")
    return "; ".join(messages)


def report(config: RunConfig) -> int:
    """Print the summary recomputed from a JSON artifact."""
    try:
        result = read_json(config.input_path)
    except (OSError, ValidationError, ValueError) as exc:
        print(f"qdeform: error: argument --input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    recomputed = result.model_copy(update={"summary": summarize(result)})
    if recomputed.summary != result.summary:
        logger.warning("stored summary differs from the recomputed one")
    print(summary_line(recomputed))
    return EXIT_OK


def write_failure(config: RunConfig, exc: NumericFailure) -> None:
    if config.output_path is not None:
        with open(config.output_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(ujson.dumps(exc.to_dict(), indent=2, sort_keys=True))
            handle.write("\n")


def run(config: RunConfig) -> int:
    """
    Run one validated configuration.

    Writes the artifact to config.output_path (summary line on stdout) or,
    without a path, the artifact to stdout and the summary line to stderr.

    Returns:
        Process exit status
    """
    if config.command is Command.REPORT:
        return report(config)
    try:
        result = run_command(config)
    except NumericFailure as exc:
        logger.error("numeric failure: %s %s", exc.message, exc.payload)
        write_failure(config, exc)
        return EXIT_NUMERIC
    except InvalidParameterError as exc:
        print(f"qdeform: error: {exc.message}", file=sys.stderr)
        return EXIT_INVALID
    line = summary_line(result)
    if config.output_path is None:
        sys.stdout.write(render(result, config.format))
        print(line, file=sys.stderr)
    else:
        write_artifact(result, config.format, config.output_path)
        print(line)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
    except ValidationError as exc:
        print(f"qdeform: error: {describe_validation_error(exc)}", file=sys.stderr)
        return EXIT_INVALID
    return run(config)


# Run the tool when executed directly
if __name__ == "__main__":
    sys.exit(main())
