# Pydantic models of the q-deformed toolkit
from .deformation import DeformationParameter, Regime
from .combinatorics import QFactorialTable, StirlingConstant
from .divergence import IndexMap, ProbVector
from .distribution import (
    ExactNormalization,
    NormalizationMeta,
    NormalizationMode,
    QBinomialPmf,
    QBinomialSpec,
    ShiftNormalization,
)
from .limits import (
    CltResidualReport,
    CltSweep,
    CollapseReport,
    CollapseSeries,
    DecayPoint,
    LdpEntry,
    LdpSeries,
    QGaussianFit,
    ScaledDensity,
)
from .run import Cell, Command, CommandResult, OutputFormat, RunConfig
