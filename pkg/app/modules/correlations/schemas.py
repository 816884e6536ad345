"""
Pydantic schemas for two-time correlations and the three-term functional K3.
"""
from enum import Enum
from typing import ClassVar, List, Optional, Tuple

from pydantic import BaseModel


class ClosedFormVariant(str, Enum):
    """How the closed-form helper K is read."""
    AS_PRINTED = "as-printed"
    REPAIRED = "repaired"


class CorrelationMethod(str, Enum):
    SIMULATION = "sim"
    CLOSED_REPAIRED = "closed-repaired"
    CLOSED_PRINTED = "closed-printed"

    @property
    def variant(self) -> Optional[ClosedFormVariant]:
        return {
            CorrelationMethod.CLOSED_REPAIRED: ClosedFormVariant.REPAIRED,
            CorrelationMethod.CLOSED_PRINTED: ClosedFormVariant.AS_PRINTED,
        }.get(self)


class LgiRegime(str, Enum):
    """Where a K3 value sits relative to the macrorealist, Tsirelson and algebraic bounds."""
    MACROREALIST = "macrorealist"
    QUANTUM = "quantum"
    BEYOND_TSIRELSON = "beyond-tsirelson"
    ALGEBRAIC_MAXIMUM = "algebraic-maximum"


class RikFactors(BaseModel):
    """R, I and K helper values for a time gap delta at angle alpha."""
    r: float
    i_factor: float
    k: float


class CorrelationResult(BaseModel):
    c21: float
    c32: float
    c31: float
    k3: float
    method: CorrelationMethod
    regime: Optional[LgiRegime] = None

    class Config:
        json_schema_extra = {
            "example": {
                "c21": 0.5,
                "c32": 0.6666666666666666,
                "c31": -1.0,
                "k3": 2.1666666666666665,
                "method": "sim",
                "regime": "beyond-tsirelson",
            }
        }


class VariantDeviation(BaseModel):
    """Largest |closed - sim| seen for one closed-form variant."""
    EXPORT_FIELDS: ClassVar[Tuple[str, ...]] = (
        "variant",
        "max_abs_deviation",
        "worst_alpha",
        "worst_t_i",
        "worst_t_j",
        "singular_points",
        "samples",
    )

    variant: ClosedFormVariant
    max_abs_deviation: float
    worst_alpha: Optional[float] = None
    worst_t_i: Optional[float] = None
    worst_t_j: Optional[float] = None
    singular_points: int = 0
    samples: int


class VerificationReport(BaseModel):
    tol: float
    seed: int
    alpha_max: float
    deviations: List[VariantDeviation]

    def deviation(self, variant: ClosedFormVariant) -> VariantDeviation:
        return next(d for d in self.deviations if d.variant == variant)

    @property
    def passed(self) -> bool:
        return self.deviation(ClosedFormVariant.REPAIRED).max_abs_deviation <= self.tol
