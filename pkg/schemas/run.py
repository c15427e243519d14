from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import COLLAPSE_N_LIST, DENSITY_WINDOW, RESIDUAL_WINDOW
from .distribution import NormalizationMode


class Command(str, Enum):
    """Experiments the CLI and the API can run."""
    PMF = "pmf"
    STIRLING = "stirling"
    DIVERGENCE = "divergence"
    LDP = "ldp"
    CLT = "clt"
    COLLAPSE = "collapse"
    REPORT = "report"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# Fields each command needs besides q (report needs input_path only)
REQUIRED_FIELDS = {
    Command.PMF: ("q", "n"),
    Command.STIRLING: ("q", "n_list"),
    Command.DIVERGENCE: ("q", "x"),
    Command.LDP: ("q", "x", "n_list"),
    Command.CLT: ("q", "n"),
    Command.COLLAPSE: ("q",),
    Command.REPORT: ("input_path",),
}

# Command-line flag of every RunConfig field, used in error messages
FLAG_NAMES = {
    "command": "command",
    "q": "--q",
    "r": "--r",
    "n": "--n",
    "n_list": "--n-list",
    "x": "--x",
    "window": "--window",
    "mode": "--mode",
    "output_path": "--output",
    "format": "--format",
    "input_path": "--input",
    "workers": "--workers",
}


class RunConfig(BaseModel):
    """
    Validated configuration of one run.

    Attributes:
        command: Experiment to run
        q: Deformation index in (0, 2)
        r: Success parameter in (0, 1)
        n: Number of trials (pmf, clt)
        n_list: Strictly increasing trial counts (stirling, ldp, collapse)
        x: Tail threshold for ldp, first component of p for divergence
        window: Half-width of the |x| window (clt, collapse)
        mode: Normalization mode; None picks the command default (see effective_mode)
        output_path: Artifact destination; None writes to stdout
        format: Artifact format
        input_path: JSON artifact read by the report command
        workers: Threads used by n-sweeps
    """
    model_config = ConfigDict(frozen=True)

    command: Command
    q: Optional[float] = Field(None, gt=0.0, lt=2.0)
    r: float = Field(0.5, gt=0.0, lt=1.0)
    n: Optional[int] = Field(None, ge=2)
    n_list: Optional[Tuple[int, ...]] = None
    x: Optional[float] = Field(None, gt=0.0, lt=1.0)
    window: Optional[float] = Field(None, gt=0.0)
    mode: Optional[NormalizationMode] = None
    output_path: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV
    input_path: Optional[Path] = None
    workers: int = Field(1, ge=1, le=64)

    @field_validator("n_list")
    @classmethod
    def check_n_list(cls, value: Optional[Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
        if value is None:
            return value
        if not value:
            raise ValueError("n-list is empty")
        if any(n < 1 for n in value):
            raise ValueError("n-list entries must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("n-list entries must be unique and sorted")
        return value

    @model_validator(mode="after")
    def check_required(self) -> "RunConfig":
        missing = [FLAG_NAMES[name] for name in REQUIRED_FIELDS[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.command.value} requires {', '.join(missing)}")
        if self.command in (Command.LDP, Command.COLLAPSE) and self.n_list and self.n_list[0] < 2:
            raise ValueError("--n-list entries must be at least 2 for distributions")
        return self

    @property
    def effective_window(self) -> float:
        if self.window is not None:
            return self.window
        return DENSITY_WINDOW if self.command is Command.COLLAPSE else RESIDUAL_WINDOW

    @property
    def effective_mode(self) -> NormalizationMode:
        """ExactCq for ldp, whose limit is stated for that distribution; MaxShift elsewhere."""
        if self.mode is not None:
            return self.mode
        return NormalizationMode.EXACT_CQ if self.command is Command.LDP else NormalizationMode.MAX_SHIFT

    @property
    def effective_n_list(self) -> Tuple[int, ...]:
        if self.n_list is not None:
            return self.n_list
        return tuple(COLLAPSE_N_LIST)


Cell = Union[int, float, str, bool, None]


class CommandResult(BaseModel):
    """
    Artifact of one run: tabular rows plus summary metrics.

    Attributes:
        command: Command that produced the rows
        config: Parameters of the run (paths omitted)
        columns: Column names, fixed per command
        rows: Table body
        summary: Headline metrics, derived from config and rows only
        metadata: Extra values that are not derivable from the rows
    """
    command: Command
    config: Dict[str, Any]
    columns: List[str]
    rows: List[List[Cell]]
    summary: Dict[str, Cell]
    metadata: Dict[str, Cell] = Field(default_factory=dict)
