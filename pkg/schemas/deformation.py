from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, computed_field

from config import CLASSICAL_EPS


class Regime(str, Enum):
    """Qualitative behavior of exp_q for a given q."""
    COMPACT_SUPPORT = "compact_support"
    CLASSICAL_LIMIT = "classical_limit"
    HEAVY_TAIL = "heavy_tail"


class DeformationParameter(BaseModel):
    """
    Validated deformation parameter.

    Frozen and hashable, so it can key cached factorial tables.

    Attributes:
        q: Deformation index in the open interval (0, 2)
        classical_eps: Half-width of the band around q = 1 that uses ln/exp
    """
    model_config = ConfigDict(frozen=True)

    q: float = Field(..., gt=0.0, lt=2.0)
    classical_eps: float = Field(CLASSICAL_EPS, gt=0.0, lt=0.5)

    @computed_field
    @property
    def regime(self) -> Regime:
        if abs(self.q - 1.0) < self.classical_eps:
            return Regime.CLASSICAL_LIMIT
        if self.q < 1.0:
            return Regime.COMPACT_SUPPORT
        return Regime.HEAVY_TAIL

    @property
    def is_classical(self) -> bool:
        return self.regime is Regime.CLASSICAL_LIMIT

    @property
    def one_minus_q(self) -> float:
        return 1.0 - self.q

    def dual(self) -> "DeformationParameter":
        """Return the parameter with index 2 - q (same classical band)."""
        return DeformationParameter(q=2.0 - self.q, classical_eps=self.classical_eps)
