"""
Types for sigma_y projective measurements and the two-time protocol.
"""
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Tuple

from pydantic import BaseModel, Field

from app.modules.qmath.schemas import ComplexMat2


class Outcome(IntEnum):
    """Dichotomic measurement outcome q = +/-1."""
    PLUS = 1
    MINUS = -1


OUTCOMES = (Outcome.PLUS, Outcome.MINUS)


@dataclass(frozen=True)
class Projector:
    q: Outcome
    pi: ComplexMat2


@dataclass(frozen=True)
class TwoTimeDistribution:
    """p(q_i) at the first time and p(q_j | q_i) at the second."""
    p_first: Dict[Outcome, float]
    p_cond: Dict[Tuple[Outcome, Outcome], float]


class TwoTimeResponse(BaseModel):
    """Flattened TwoTimeDistribution for the HTTP surface."""
    alpha: float
    t_i: float
    t_j: float
    p_plus: float = Field(..., ge=0, le=1)
    p_minus: float = Field(..., ge=0, le=1)
    p_plus_given_plus: float = Field(..., ge=0, le=1)
    p_minus_given_plus: float = Field(..., ge=0, le=1)
    p_plus_given_minus: float = Field(..., ge=0, le=1)
    p_minus_given_minus: float = Field(..., ge=0, le=1)

    class Config:
        json_schema_extra = {
            "example": {
                "alpha": 0.7853981633974483,
                "t_i": 0.7853981633974483,
                "t_j": 1.5707963267948966,
                "p_plus": 0.14644660940672624,
                "p_minus": 0.8535533905932737,
                "p_plus_given_plus": 0.14644660940672624,
                "p_minus_given_plus": 0.8535533905932737,
                "p_plus_given_minus": 0.14644660940672627,
                "p_minus_given_minus": 0.8535533905932737,
            }
        }
