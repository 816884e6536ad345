"""
Sequential sigma_y measurements on the PT-evolved qubit.

`two_time_protocol` is the reference computation every correlation value
is checked against.
"""
import logging
import threading
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import DomainError, ProbabilityRangeError, ZeroProbabilityBranchError
from app.modules.measurement.schemas import (
    OUTCOMES,
    Outcome,
    Projector,
    TwoTimeDistribution,
    TwoTimeResponse,
)
from app.modules.pt_core.schemas import DimensionlessTime, QuantumState
from app.modules.pt_core.service import check_alpha, check_time, propagator_sigma_y
from app.modules.qmath.schemas import IDENTITY, SIGMA_Y, mat2
from app.modules.qmath.service import mat_mul, trace

logger = logging.getLogger(__name__)


class ClampAudit:
    """Append-only record of probabilities pulled back into [0, 1]."""

    def __init__(self):
        self._lock = threading.Lock()
        self._events: List[Tuple[float, float]] = []

    def record(self, raw: float, clamped: float) -> None:
        with self._lock:
            self._events.append((raw, clamped))

    def events(self) -> List[Tuple[float, float]]:
        with self._lock:
            return list(self._events)

    def clear(self) -> None:
        with self._lock:
            self._events.clear()


clamp_audit = ClampAudit()

# Row / column of each outcome in the sigma_y eigenbasis.
_INDEX = {Outcome.PLUS: 0, Outcome.MINUS: 1}

_PROJECTORS = (
    Projector(q=Outcome.PLUS, pi=mat2(0.5 * (IDENTITY + SIGMA_Y))),
    Projector(q=Outcome.MINUS, pi=mat2(0.5 * (IDENTITY - SIGMA_Y))),
)


def sigma_y_projectors() -> Tuple[Projector, Projector]:
    """(Pi_+, Pi_-) = ((I + sigma_y) / 2, (I - sigma_y) / 2)."""
    return _PROJECTORS


def projector(q: Outcome) -> Projector:
    return _PROJECTORS[0] if q == Outcome.PLUS else _PROJECTORS[1]


def clamp_probability(p: float, tol: Optional[float] = None) -> float:
    """
    Pull floating-point dust back into [0, 1].

    Raises:
        ProbabilityRangeError: if p lies outside [-tol, 1 + tol]
    """
    tol = settings.LGI_PT_PROB_TOL if tol is None else tol
    if p < -tol or p > 1.0 + tol:
        raise ProbabilityRangeError(f"Probability {p!r} is outside [0, 1] beyond tolerance {tol!r}")

    clamped = min(max(p, 0.0), 1.0)
    if clamped != p:
        logger.debug("Clamped probability %r to %r", p, clamped)
        clamp_audit.record(p, clamped)
    return clamped


def outcome_probabilities(state: QuantumState) -> Dict[Outcome, float]:
    """p(q) = Tr[rho Pi_q] for both outcomes."""
    return {
        proj.q: clamp_probability(trace(mat_mul(state.rho, proj.pi)).real)
        for proj in _PROJECTORS
    }


def collapse(state: QuantumState, q: Outcome, tol_p: Optional[float] = None) -> QuantumState:
    """
    Lueders update rho -> Pi_q rho Pi_q / p(q); rank-1 projectors leave the pure state Pi_q.

    Raises:
        ZeroProbabilityBranchError: if p(q) <= tol_p
    """
    tol = settings.LGI_PT_PROB_TOL if tol_p is None else tol_p
    p = outcome_probabilities(state)[q]
    if p <= tol:
        raise ZeroProbabilityBranchError(f"Outcome {int(q):+d} has probability {p!r}")

    pi = projector(q).pi
    post = mat_mul(mat_mul(pi, state.rho), pi) / p
    return QuantumState(rho=mat2(0.5 * (post + post.conj().T)))


def check_times(t_i: DimensionlessTime, t_j: DimensionlessTime) -> None:
    """
    Raises:
        DomainError: unless 0 <= t_i < t_j and both are finite
    """
    check_time(t_i, "t_i")
    check_time(t_j, "t_j")
    if t_i < 0:
        raise DomainError(f"t_i must be >= 0, got {t_i!r}")
    if not t_j > t_i:
        raise DomainError(f"Measurement times must satisfy t_i < t_j, got t_i={t_i!r}, t_j={t_j!r}")


def two_time_protocol(
    alpha: float,
    t_i: DimensionlessTime,
    t_j: DimensionlessTime,
    ep_guard: Optional[float] = None,
) -> TwoTimeDistribution:
    """
    One run of the two-time scheme starting from I/2.

    Evolve to t_i, measure sigma_y, collapse, evolve by t_j - t_i and measure
    again. The conditionals are renormalized after the non-unitary step, so
    every conditional distribution sums to one.

    The run is carried out on amplitudes in the sigma_y eigenbasis: from I/2
    the weight of q_i is the squared norm of row q_i of U(t_i), and collapse
    leaves the pure state |q_i>, which U(t_j - t_i) maps to column q_i. A first
    outcome of negligible probability therefore still has well-defined
    conditionals and only contributes its (negligible) weight to correlations.

    Args:
        alpha: non-Hermiticity angle in [0, pi/2 - guard)
        t_i: first measurement time, >= 0
        t_j: second measurement time, > t_i
        ep_guard: exceptional-point guard override, fraction of pi

    Returns:
        p(q_i) and p(q_j | q_i) for both outcomes

    Raises:
        DomainError: alpha or the times are out of range
        ProbabilityRangeError: a probability left [0, 1] beyond the clamp window
    """
    check_alpha(alpha, ep_guard)
    check_times(t_i, t_j)

    first_weights = np.abs(propagator_sigma_y(alpha, t_i)) ** 2
    row_weights = first_weights.sum(axis=1)
    total = float(row_weights.sum())
    p_first = {q: clamp_probability(float(row_weights[_INDEX[q]]) / total) for q in OUTCOMES}

    gap_weights = np.abs(propagator_sigma_y(alpha, t_j - t_i)) ** 2
    p_cond: Dict[Tuple[Outcome, Outcome], float] = {}
    for q_i in OUTCOMES:
        if p_first[q_i] <= settings.LGI_PT_PROB_TOL:
            logger.debug(
                "Outcome %+d at t_i=%r has probability %r; its branch carries no weight",
                int(q_i),
                t_i,
                p_first[q_i],
            )
        column = gap_weights[:, _INDEX[q_i]]
        norm = float(column.sum())
        for q_j in OUTCOMES:
            p_cond[(q_i, q_j)] = clamp_probability(float(column[_INDEX[q_j]]) / norm)

    return TwoTimeDistribution(p_first=p_first, p_cond=p_cond)


def to_response(alpha: float, t_i: float, t_j: float, dist: TwoTimeDistribution) -> TwoTimeResponse:
    """
    Flatten a TwoTimeDistribution for the HTTP surface.

    Args:
        alpha: angle the distribution was computed at
        t_i: first measurement time
        t_j: second measurement time
        dist: result of two_time_protocol

    Returns:
        TwoTimeResponse with p_plus, p_minus and the four p_<q_j>_given_<q_i> fields
    """
    plus, minus = Outcome.PLUS, Outcome.MINUS
    return TwoTimeResponse(
        alpha=alpha,
        t_i=t_i,
        t_j=t_j,
        p_plus=dist.p_first[plus],
        p_minus=dist.p_first[minus],
        p_plus_given_plus=dist.p_cond[(plus, plus)],
        p_minus_given_plus=dist.p_cond[(plus, minus)],
        p_plus_given_minus=dist.p_cond[(minus, plus)],
        p_minus_given_minus=dist.p_cond[(minus, minus)],
    )
