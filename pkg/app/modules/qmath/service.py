"""
Complex 2x2 linear algebra kernels.

Every operator in the package (Hamiltonian, propagator, projectors, states)
is expressed through these pure functions.
"""
import cmath

import numpy as np

from app.core.errors import DomainError
from app.modules.qmath.schemas import (
    DEFAULT_TOL,
    IDENTITY,
    Complex,
    ComplexMat2,
    ComplexVec2,
    mat2,
    vec2,
)

# Below this |omega| the sinc factor switches to its Taylor series.
SINC_SERIES_CUTOFF = 1e-4


def mat_mul(a: ComplexMat2, b: ComplexMat2) -> ComplexMat2:
    """
    Matrix product a @ b as a new read-only matrix.

    Args:
        a: left factor
        b: right factor

    Returns:
        The 2x2 product

    Raises:
        DomainError: if the product overflows to a non-finite entry
    """
    return mat2(a @ b)


def mat_vec(a: ComplexMat2, v: ComplexVec2) -> ComplexVec2:
    """a @ v as a read-only vector."""
    return vec2(a @ v)


def adjoint(a: ComplexMat2) -> ComplexMat2:
    """Conjugate transpose."""
    return mat2(a.conj().T)


def trace(a: ComplexMat2) -> Complex:
    """Sum of the diagonal, as a Python complex."""
    return complex(np.trace(a))


def det(a: ComplexMat2) -> Complex:
    """Determinant; for traceless input this is the omega**2 of expm_traceless."""
    return complex(np.linalg.det(a))


def frobenius_norm(a: ComplexMat2) -> float:
    """sqrt of the sum of |a_ij|^2."""
    return float(np.linalg.norm(a, ord="fro"))


def inner(u: ComplexVec2, v: ComplexVec2) -> Complex:
    """<u|v>, conjugate-linear in the first slot."""
    return complex(np.vdot(u, v))


def is_normalized(v: ComplexVec2, tol: float = DEFAULT_TOL) -> bool:
    """
    Check ||v|| = 1 within tol.

    Args:
        v: vector to check
        tol: absolute tolerance on the 2-norm

    Returns:
        True if abs(||v|| - 1) <= tol
    """
    return abs(float(np.linalg.norm(v)) - 1.0) <= tol


def sinc_from_square(omega_sq: Complex) -> Complex:
    """sin(w)/w as a function of w**2, smooth through w = 0 and complex w."""
    if abs(omega_sq) < SINC_SERIES_CUTOFF**2:
        return 1.0 - omega_sq / 6.0 + omega_sq * omega_sq / 120.0
    omega = cmath.sqrt(omega_sq)
    return cmath.sin(omega) / omega


def cos_from_square(omega_sq: Complex) -> Complex:
    """cos(w) as a function of w**2 (even, so the branch of the root is irrelevant)."""
    if abs(omega_sq) < SINC_SERIES_CUTOFF**2:
        return 1.0 - omega_sq / 2.0 + omega_sq * omega_sq / 24.0
    return cmath.cos(cmath.sqrt(omega_sq))


def expm_traceless(m: ComplexMat2, tol: float = DEFAULT_TOL) -> ComplexMat2:
    """
    Exact exponential of a traceless 2x2 matrix.

    Cayley-Hamilton gives m @ m = -det(m) * I, so the exponential series
    splits into cos(w) * I + sin(w)/w * m with w**2 = det(m).

    Raises:
        DomainError: if |trace(m)| >= tol
    """
    tr = trace(m)
    if abs(tr) >= tol:
        raise DomainError(f"expm_traceless requires a traceless matrix, got trace {tr}")

    omega_sq = det(m)
    return mat2(cos_from_square(omega_sq) * IDENTITY + sinc_from_square(omega_sq) * m)


def validate_density(rho: ComplexMat2, tol: float = DEFAULT_TOL) -> bool:
    """True iff rho is Hermitian, unit-trace and positive semidefinite, all within tol."""
    if tol <= 0:
        raise DomainError("validate_density requires tol > 0")

    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2) or not np.all(np.isfinite(rho)):
        return False
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False

    eigenvalues = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    return bool(np.all(eigenvalues >= -tol))
