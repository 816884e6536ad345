"""
Pydantic schemas for parameter sweeps, extremum searches and table export.
"""
import math
from enum import Enum
from typing import ClassVar, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from app.modules.correlations.schemas import CorrelationMethod
from app.modules.pt_core.service import check_alpha

QUARTER_TAU = math.pi / 4


class TableFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class SweepConfig(BaseModel):
    """Grid of (alpha, tau) points for a K3 sweep."""
    alphas: List[float] = Field(..., min_length=1)
    tau_min: float = 0.0
    tau_max: float = math.pi
    tau_steps: int = Field(default=256, ge=2)
    method: CorrelationMethod = CorrelationMethod.SIMULATION
    refine_tol: float = Field(default=1e-10, gt=0)
    ep_guard: Optional[float] = None

    class Config:
        json_schema_extra = {
            "example": {
                "alphas": [0.0, 0.7853981633974483],
                "tau_min": 0.0,
                "tau_max": 3.141592653589793,
                "tau_steps": 64,
                "method": "sim",
            }
        }

    @model_validator(mode="after")
    def check_grid(self) -> "SweepConfig":
        if not self.tau_min < self.tau_max:
            raise ValueError(f"tau_min must be < tau_max, got {self.tau_min} >= {self.tau_max}")
        for alpha in self.alphas:
            check_alpha(alpha, self.ep_guard)
        return self


class ScanRow(BaseModel):
    """
    One (alpha, tau) point of a sweep.

    A failed point keeps alpha and tau, leaves the correlations empty and
    carries the reason in `error`, which is never exported.
    """
    EXPORT_FIELDS: ClassVar[Tuple[str, ...]] = ("alpha", "tau", "c21", "c32", "c31", "k3")

    alpha: float
    tau: float
    c21: Optional[float] = None
    c32: Optional[float] = None
    c31: Optional[float] = None
    k3: Optional[float] = None
    error: Optional[str] = None


class ExtremumRecord(BaseModel):
    """Maximum of K3 over the tau window and the smallest tau reaching it."""
    EXPORT_FIELDS: ClassVar[Tuple[str, ...]] = ("alpha", "k3_max", "tau_min_arg")

    alpha: float
    k3_max: float = Field(..., ge=-3 - 1e-9, le=3 + 1e-9)
    tau_min_arg: float

    class Config:
        json_schema_extra = {
            "example": {
                "alpha": 0.0,
                "k3_max": 1.5,
                "tau_min_arg": 0.5235987755982988,
            }
        }
