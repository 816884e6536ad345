"""
Value types for the 2x2 complex linear algebra layer.

Matrices and vectors are read-only numpy arrays; building one through
`mat2` / `vec2` is the only place finiteness is checked.
"""
from typing import Any

import numpy as np
import numpy.typing as npt

from app.core.errors import DomainError

Complex = complex
ComplexMat2 = npt.NDArray[np.complex128]
ComplexVec2 = npt.NDArray[np.complex128]

# Default tolerance for algebraic identities.
DEFAULT_TOL = 1e-12


def mat2(entries: Any) -> ComplexMat2:
    """Build an immutable, finite 2x2 complex matrix."""
    m = np.array(entries, dtype=np.complex128)
    if m.shape != (2, 2):
        raise DomainError(f"Expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("Matrix entries must be finite")
    m.setflags(write=False)
    return m


def vec2(entries: Any) -> ComplexVec2:
    """Build an immutable, finite complex 2-vector."""
    v = np.array(entries, dtype=np.complex128)
    if v.shape != (2,):
        raise DomainError(f"Expected a 2-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("Vector entries must be finite")
    v.setflags(write=False)
    return v


IDENTITY = mat2([[1, 0], [0, 1]])
ZERO = mat2([[0, 0], [0, 0]])
SIGMA_X = mat2([[0, 1], [1, 0]])
SIGMA_Y = mat2([[0, -1j], [1j, 0]])
SIGMA_Z = mat2([[1, 0], [0, -1]])
