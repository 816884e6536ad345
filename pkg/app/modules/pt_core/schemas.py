"""
Types for the PT-symmetric two-level system.

The numerical carriers are frozen dataclasses around read-only matrices;
the report models at the bottom are what the API and CLI serialize.
"""
from dataclasses import dataclass
from typing import List

from pydantic import BaseModel

from app.core.errors import DomainError
from app.modules.qmath.schemas import ComplexMat2, ComplexVec2
from app.modules.qmath.service import validate_density

# Dimensionless time t' = (delta_E / 2) * t.
DimensionlessTime = float

# States handed around the package must pass validate_density at this tolerance.
STATE_TOL = 1e-10


@dataclass(frozen=True)
class PtHamiltonian:
    """H = s * [[i sin(alpha), 1], [1, -i sin(alpha)]] in the unbroken regime."""
    s: float
    alpha: float
    matrix: ComplexMat2


@dataclass(frozen=True)
class EigenSystem:
    e_plus: float
    e_minus: float
    v_plus: ComplexVec2
    v_minus: ComplexVec2
    delta_e: float


@dataclass(frozen=True)
class QuantumState:
    rho: ComplexMat2

    def __post_init__(self):
        if not validate_density(self.rho, STATE_TOL):
            raise DomainError("rho is not a unit-trace positive semidefinite Hermitian matrix")


class EigenReport(BaseModel):
    """Eigensystem and PT-symmetry diagnostics at one (s, alpha)."""
    s: float
    alpha: float
    e_plus: float
    e_minus: float
    delta_e: float
    overlap: float
    eigen_residual: float
    pt_defect: float
    pt_eigenvector_residual: float

    class Config:
        json_schema_extra = {
            "example": {
                "s": 1.0,
                "alpha": 1.0471975511965976,
                "e_plus": 0.5,
                "e_minus": -0.5,
                "delta_e": 1.0,
                "overlap": 0.8660254037844386,
                "eigen_residual": 1.1e-16,
                "pt_defect": 0.0,
                "pt_eigenvector_residual": 1.6e-16,
            }
        }


class MatrixEntry(BaseModel):
    re: float
    im: float


class PropagatorResponse(BaseModel):
    """Row-major entries of U(t')."""
    alpha: float
    t_prime: float
    entries: List[List[MatrixEntry]]
