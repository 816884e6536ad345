"""
PT-symmetric Hamiltonian, eigensystem, propagator and normalized evolution.

All times below are the dimensionless t' = (delta_E / 2) * t; only
`propagator_physical` sees physical time.
"""
import math
import re
from typing import Optional

import numpy as np

from app.core.config import settings
from app.core.errors import DomainError, ExceptionalPointError, NormCollapseError
from app.modules.pt_core.schemas import (
    DimensionlessTime,
    EigenReport,
    EigenSystem,
    PtHamiltonian,
    QuantumState,
)
from app.modules.qmath.schemas import SIGMA_X, ComplexMat2, ComplexVec2, mat2, vec2
from app.modules.qmath.service import (
    adjoint,
    frobenius_norm,
    inner,
    mat_mul,
    mat_vec,
    trace,
)

MIN_EP_GUARD = 1e-6
MAX_EP_GUARD = 0.5

# Parity is sigma_x; time reversal is entrywise complex conjugation.
PARITY = SIGMA_X

_ANGLE_PATTERN = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(pi)?\s*$")


def parse_angle(text: str) -> float:
    """
    Parse an angle in radians, with an optional `pi` suffix.

    "0.25pi" -> pi/4, "pi" -> pi, "0.5" -> 0.5.
    """
    match = _ANGLE_PATTERN.match(text)
    if not match or (match.group(1) is None and match.group(2) is None):
        raise DomainError(f"Cannot parse angle {text!r}; use radians or a 'pi' suffix like 0.25pi")

    number = float(match.group(1)) if match.group(1) is not None else 1.0
    return number * math.pi if match.group(2) else number


def resolve_ep_guard(ep_guard: Optional[float] = None) -> float:
    guard = settings.LGI_PT_EP_GUARD if ep_guard is None else ep_guard
    if not MIN_EP_GUARD <= guard < MAX_EP_GUARD:
        raise DomainError(f"ep_guard must lie in [{MIN_EP_GUARD:g}, {MAX_EP_GUARD:g}), got {guard}")
    return guard


def alpha_upper_bound(ep_guard: Optional[float] = None) -> float:
    """Largest admissible alpha is strictly below pi/2 - ep_guard * pi."""
    return math.pi / 2 - resolve_ep_guard(ep_guard) * math.pi


def check_alpha(alpha: float, ep_guard: Optional[float] = None) -> float:
    """
    Validate alpha against the unbroken, guarded domain.

    Raises:
        DomainError: alpha negative or not finite
        ExceptionalPointError: alpha at or beyond pi/2 - ep_guard * pi
    """
    bound = alpha_upper_bound(ep_guard)
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must satisfy 0 <= alpha < {bound!r}, got {alpha!r}")
    if alpha >= bound:
        raise ExceptionalPointError(
            f"alpha={alpha!r} is too close to the exceptional point pi/2; "
            f"valid range is 0 <= alpha < {bound!r}"
        )
    return alpha


def check_time(t_prime: DimensionlessTime, name: str = "t_prime") -> float:
    """
    Reject non-finite times; negative times are allowed here.

    Raises:
        DomainError: if t_prime is NaN or infinite
    """
    if not math.isfinite(t_prime):
        raise DomainError(f"{name} must be finite, got {t_prime!r}")
    return float(t_prime)


def build_hamiltonian(s: float, alpha: float, ep_guard: Optional[float] = None) -> PtHamiltonian:
    """Realize H(s, alpha); traceless by construction."""
    if not math.isfinite(s) or s == 0:
        raise DomainError(f"s must be finite and non-zero, got {s!r}")
    check_alpha(alpha, ep_guard)

    gain = math.sin(alpha)
    matrix = mat2(s * np.array([[1j * gain, 1.0], [1.0, -1j * gain]]))
    return PtHamiltonian(s=float(s), alpha=float(alpha), matrix=matrix)


def pt_eigenvalue_gap(h: PtHamiltonian) -> float:
    """delta_E = 2 s cos(alpha); closes at the exceptional point."""
    return 2.0 * h.s * math.cos(h.alpha)


def eigensystem(h: PtHamiltonian) -> EigenSystem:
    """
    Real spectrum +/- s cos(alpha) with unit-normalized, non-orthogonal eigenvectors.

    Global phases follow exp(+/- i alpha / 2); |<v+|v->| = sin(alpha).
    """
    alpha = h.alpha
    energy = h.s * math.cos(alpha)
    norm = 1.0 / math.sqrt(2.0)

    v_plus = vec2(norm * np.exp(0.5j * alpha) * np.array([1.0, np.exp(-1j * alpha)]))
    v_minus = vec2(norm * 1j * np.exp(-0.5j * alpha) * np.array([1.0, -np.exp(1j * alpha)]))

    return EigenSystem(
        e_plus=energy,
        e_minus=-energy,
        v_plus=v_plus,
        v_minus=v_minus,
        delta_e=pt_eigenvalue_gap(h),
    )


def eigen_residual(h: PtHamiltonian, system: EigenSystem) -> float:
    """max over both branches of ||H v - E v||."""
    return max(
        float(np.linalg.norm(mat_vec(h.matrix, v) - e * v))
        for e, v in ((system.e_plus, system.v_plus), (system.e_minus, system.v_minus))
    )


def apply_pt(v: ComplexVec2) -> ComplexVec2:
    """PT|v> = sigma_x conj(v)."""
    return mat_vec(PARITY, v.conj())


def pt_defect(h: PtHamiltonian) -> float:
    """||P conj(H) P - H||_F; vanishes for every Hamiltonian of the family."""
    return frobenius_norm(mat_mul(mat_mul(PARITY, mat2(h.matrix.conj())), PARITY) - h.matrix)


def pt_eigenvector_check(h: PtHamiltonian) -> float:
    """
    Unbroken-phase check that PT maps each eigenvector onto itself up to a phase.

    Returns the largest ||PT v - lambda v|| with lambda = <v|PT v>.
    """
    system = eigensystem(h)
    residual = 0.0
    for v in (system.v_plus, system.v_minus):
        image = apply_pt(v)
        phase = inner(v, image)
        residual = max(residual, float(np.linalg.norm(image - phase * v)), abs(abs(phase) - 1.0))
    return residual


def eigen_report(h: PtHamiltonian) -> EigenReport:
    """Spectrum, eigenvector overlap and PT residuals of h in one record."""
    system = eigensystem(h)
    return EigenReport(
        s=h.s,
        alpha=h.alpha,
        e_plus=system.e_plus,
        e_minus=system.e_minus,
        delta_e=system.delta_e,
        overlap=abs(inner(system.v_plus, system.v_minus)),
        eigen_residual=eigen_residual(h, system),
        pt_defect=pt_defect(h),
        pt_eigenvector_residual=pt_eigenvector_check(h),
    )


def propagator_alpha(alpha: float, t_prime: DimensionlessTime) -> ComplexMat2:
    """
    U(t') = exp(-i t H) in dimensionless time.

    (1 / cos a) * [[cos(t' - a), -i sin t'], [-i sin t', cos(t' + a)]]
    """
    t_prime = check_time(t_prime)
    c = math.cos(alpha)
    off = -1j * math.sin(t_prime) / c
    return mat2(
        [
            [math.cos(t_prime - alpha) / c, off],
            [off, math.cos(t_prime + alpha) / c],
        ]
    )


def propagator_sigma_y(alpha: float, t_prime: DimensionlessTime) -> ComplexMat2:
    """
    U(t') in the sigma_y eigenbasis (|+y>, |-y>).

    There U is a rotation conjugated by diag(1, r), r = (1 + sin a) / cos a:

        [[cos t',      -sin t' / r],
         [r sin t',     cos t'     ]]

    Entry [a, b] is <q_a|U|q_b>. No entry is a difference of nearly equal
    terms, even as alpha approaches pi/2.
    """
    t_prime = check_time(t_prime)
    sin_a = math.sin(alpha)
    cos_a = math.cos(alpha)
    c = math.cos(t_prime)
    s = math.sin(t_prime)
    return mat2(
        [
            [c, -s * cos_a / (1.0 + sin_a)],
            [s * (1.0 + sin_a) / cos_a, c],
        ]
    )


def propagator(h: PtHamiltonian, t_prime: DimensionlessTime) -> ComplexMat2:
    """U(t') for h; only alpha enters once time is dimensionless."""
    return propagator_alpha(h.alpha, t_prime)


def to_dimensionless(h: PtHamiltonian, t: float) -> DimensionlessTime:
    """
    Convert a physical time to t' = (delta_E / 2) * t.

    Args:
        h: the Hamiltonian fixing delta_E = 2 s cos(alpha)
        t: physical time

    Returns:
        The dimensionless time used by every propagator
    """
    return 0.5 * pt_eigenvalue_gap(h) * check_time(t, "t")


def propagator_physical(h: PtHamiltonian, t: float) -> ComplexMat2:
    """U for a physical time t, converted once to t' = s cos(alpha) t."""
    return propagator(h, to_dimensionless(h, t))


def _sandwich(u: ComplexMat2, rho: ComplexMat2) -> ComplexMat2:
    return mat_mul(mat_mul(u, rho), adjoint(u))


def survival_trace(state: QuantumState, u: ComplexMat2) -> float:
    """Re Tr[U rho U^dagger], the normalization lost to the non-unitary evolution."""
    return trace(_sandwich(u, state.rho)).real


def evolve(state: QuantumState, u: ComplexMat2, tol_norm: Optional[float] = None) -> QuantumState:
    """
    rho -> U rho U^dagger / Tr[U rho U^dagger].

    Raises:
        NormCollapseError: if the trace falls to tol_norm or below
    """
    tol = settings.LGI_PT_NORM_TOL if tol_norm is None else tol_norm
    evolved = _sandwich(u, state.rho)
    norm = trace(evolved).real
    if norm <= tol:
        raise NormCollapseError(f"Evolved trace {norm!r} is below the norm tolerance {tol!r}")

    # Symmetrize away rounding so the result is Hermitian to machine precision.
    rho = 0.5 * (evolved + evolved.conj().T) / norm
    return QuantumState(rho=mat2(rho))


def maximally_mixed() -> QuantumState:
    return QuantumState(rho=mat2([[0.5, 0.0], [0.0, 0.5]]))

