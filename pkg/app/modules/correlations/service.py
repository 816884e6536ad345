"""
Two-time correlations C_ji and the Leggett-Garg functional K3.

The simulated value (from the measurement protocol) is the reference.
The closed forms exist for speed and as a cross-check, in two readings:
REPAIRED, which matches the simulation, and AS_PRINTED, kept for comparison.
"""
import logging
import math
from typing import Optional

import numpy as np

from app.core.errors import DomainError, LgiPtError, SingularDenominatorError
from app.modules.correlations.schemas import (
    ClosedFormVariant,
    CorrelationMethod,
    CorrelationResult,
    LgiRegime,
    RikFactors,
    VariantDeviation,
    VerificationReport,
)
from app.modules.measurement.service import check_times, two_time_protocol
from app.modules.pt_core.schemas import DimensionlessTime
from app.modules.pt_core.service import check_alpha, check_time

logger = logging.getLogger(__name__)

MACROREALIST_BOUND = 1.0
TSIRELSON_BOUND = 1.5
ALGEBRAIC_MAXIMUM = 3.0

SINGULAR_TOL = 1e-12
# Physical correlations may overshoot |C| <= 1 by rounding only.
CORRELATION_SLACK = 1e-10
REGIME_TOL = 1e-9

DEFAULT_VERIFY_ALPHA_MAX = 0.49 * math.pi


def correlation_sim(
    alpha: float,
    t_i: DimensionlessTime,
    t_j: DimensionlessTime,
    ep_guard: Optional[float] = None,
) -> float:
    """C_ji = sum over q_i, q_j of q_i q_j p(q_j | q_i) p(q_i)."""
    dist = two_time_protocol(alpha, t_i, t_j, ep_guard)
    return sum(
        int(q_i) * int(q_j) * p_cond * dist.p_first[q_i]
        for (q_i, q_j), p_cond in dist.p_cond.items()
    )


def rik_factors(
    alpha: float,
    delta: float,
    variant: ClosedFormVariant = ClosedFormVariant.REPAIRED,
    ep_guard: Optional[float] = None,
) -> RikFactors:
    """
    Helper values for a gap delta.

    R = 1 + 2 sin^2(delta) tan^2(alpha)
    I = cos(2 delta) - 2 sin^2(delta) tan^2(alpha)
    K = 2 sin^2(delta) tan(alpha) sec(alpha)       REPAIRED
    K = 2 sin^2(2 delta) tan(alpha) sec(alpha)     AS_PRINTED
    """
    check_alpha(alpha, ep_guard)
    check_time(delta, "delta")

    tan_a = math.tan(alpha)
    sin_sq = math.sin(delta) ** 2
    r = 1.0 + 2.0 * sin_sq * tan_a**2
    i_factor = math.cos(2.0 * delta) - 2.0 * sin_sq * tan_a**2

    k_angle = delta if variant == ClosedFormVariant.REPAIRED else 2.0 * delta
    k = 2.0 * math.sin(k_angle) ** 2 * tan_a / math.cos(alpha)
    return RikFactors(r=r, i_factor=i_factor, k=k)


def _correlation_repaired(alpha: float, t_i: DimensionlessTime, t_j: DimensionlessTime) -> float:
    """
    REPAIRED closed form with R +/- K and I +/- K factored through 1 +/- sin(a).

    With a_ = 1 - sin(a) = cos^2(a) / (1 + sin(a)), x = sin^2(delta), y = cos^2(delta):

        (I - K) / (R + K) = (a_ - 2x) / (a_ + 2x sin a)
        (I + K) / (R - K) = (2y - a_) / (a_ + 2y sin a)

    and the first-measurement weights R_i0 - K_i0, R_i0 + K_i0 scale to
    a_ (a_ + 2 y0 sin a) and (1 + sin a)(a_ + 2 x0 sin a). The result equals
    the R, I, K expression in correlation_closed term for term.
    """
    sin_a = math.sin(alpha)
    a_ = math.cos(alpha) ** 2 / (1.0 + sin_a)

    delta = t_j - t_i
    x = math.sin(delta) ** 2
    y = math.cos(delta) ** 2
    x0 = math.sin(t_i) ** 2
    y0 = math.cos(t_i) ** 2

    branch_plus = (a_ - 2.0 * x) / (a_ + 2.0 * x * sin_a)
    branch_minus = (2.0 * y - a_) / (a_ + 2.0 * y * sin_a)
    weight_plus = a_ * (a_ + 2.0 * y0 * sin_a)
    weight_minus = (1.0 + sin_a) * (a_ + 2.0 * x0 * sin_a)
    return (weight_plus * branch_plus + weight_minus * branch_minus) / (weight_plus + weight_minus)


def correlation_closed(
    alpha: float,
    t_i: DimensionlessTime,
    t_j: DimensionlessTime,
    variant: ClosedFormVariant = ClosedFormVariant.REPAIRED,
    ep_guard: Optional[float] = None,
) -> float:
    """
    Closed-form C_ji for the maximally mixed initial state.

        I_ji (R_ji R_i0 + K_ji K_i0) + K_ji (R_ji K_i0 + R_i0 K_ji)
        -----------------------------------------------------------
                     (R_ji^2 - K_ji^2) R_i0

    REPAIRED is evaluated in the factored form of `_correlation_repaired`,
    whose denominators are positive on the whole unbroken domain; AS_PRINTED
    uses the expression above as written.

    Raises:
        SingularDenominatorError: if |R_ji^2 - K_ji^2| < 1e-12 (AS_PRINTED)
    """
    check_times(t_i, t_j)
    if variant == ClosedFormVariant.REPAIRED:
        check_alpha(alpha, ep_guard)
        return _correlation_repaired(alpha, t_i, t_j)

    ji = rik_factors(alpha, t_j - t_i, variant, ep_guard)
    i0 = rik_factors(alpha, t_i, variant, ep_guard)

    gap = ji.r**2 - ji.k**2
    if abs(gap) < SINGULAR_TOL:
        raise SingularDenominatorError(
            f"R^2 - K^2 = {gap!r} at alpha={alpha!r}, t_i={t_i!r}, t_j={t_j!r} ({variant.value})"
        )

    numerator = ji.i_factor * (ji.r * i0.r + ji.k * i0.k) + ji.k * (ji.r * i0.k + i0.r * ji.k)
    return numerator / (gap * i0.r)


def correlation(
    alpha: float,
    t_i: DimensionlessTime,
    t_j: DimensionlessTime,
    method: CorrelationMethod = CorrelationMethod.SIMULATION,
    ep_guard: Optional[float] = None,
) -> float:
    """
    C_ji by simulation or by one of the closed forms.

    Args:
        alpha: non-Hermiticity angle
        t_i: first measurement time
        t_j: second measurement time, > t_i
        method: SIMULATION, CLOSED_REPAIRED or CLOSED_PRINTED
        ep_guard: exceptional-point guard override, fraction of pi

    Returns:
        The correlation E[Q(t_i) Q(t_j)]
    """
    if method == CorrelationMethod.SIMULATION:
        return correlation_sim(alpha, t_i, t_j, ep_guard)
    return correlation_closed(alpha, t_i, t_j, method.variant, ep_guard)


def classify_k3(k3_value: float) -> LgiRegime:
    """Place K3 against the bounds 1, 3/2 and 3; the upper two allow REGIME_TOL of rounding."""
    if k3_value <= MACROREALIST_BOUND:
        return LgiRegime.MACROREALIST
    if k3_value <= TSIRELSON_BOUND + REGIME_TOL:
        return LgiRegime.QUANTUM
    if k3_value < ALGEBRAIC_MAXIMUM - REGIME_TOL:
        return LgiRegime.BEYOND_TSIRELSON
    return LgiRegime.ALGEBRAIC_MAXIMUM


def k3(
    alpha: float,
    tau: float,
    method: CorrelationMethod = CorrelationMethod.SIMULATION,
    ep_guard: Optional[float] = None,
) -> CorrelationResult:
    """
    K3 = C21 + C32 - C31 with equally spaced measurements t'_k = k * tau.

    Each correlation is an independent two-time run from I/2.
    """
    if not math.isfinite(tau) or tau <= 0:
        raise DomainError(f"tau must be > 0, got {tau!r}")

    c21 = correlation(alpha, tau, 2.0 * tau, method, ep_guard)
    c32 = correlation(alpha, 2.0 * tau, 3.0 * tau, method, ep_guard)
    c31 = correlation(alpha, tau, 3.0 * tau, method, ep_guard)

    if method != CorrelationMethod.CLOSED_PRINTED:
        for name, value in (("C21", c21), ("C32", c32), ("C31", c31)):
            if abs(value) > 1.0 + CORRELATION_SLACK:
                raise LgiPtError(f"{name}={value!r} violates |C| <= 1 at alpha={alpha!r}, tau={tau!r}")

    k3_value = c21 + c32 - c31
    return CorrelationResult(
        c21=c21,
        c32=c32,
        c31=c31,
        k3=k3_value,
        method=method,
        regime=classify_k3(k3_value),
    )


def k3_quarter_tau(alpha: float, ep_guard: Optional[float] = None) -> float:
    """K3 at tau = pi/4 reduced by hand: 1 + sin^2 a + 2 sin^2 a / (1 + sin^2 a)."""
    check_alpha(alpha, ep_guard)
    sin_sq = math.sin(alpha) ** 2
    return 1.0 + sin_sq + 2.0 * sin_sq / (1.0 + sin_sq)


def verify_closed_forms(
    samples: int = 10_000,
    seed: int = 0,
    tol: float = 1e-9,
    alpha_max: float = DEFAULT_VERIFY_ALPHA_MAX,
    ep_guard: Optional[float] = None,
) -> VerificationReport:
    """
    Compare both closed-form variants against the simulation on random points.

    alpha ~ U[0, alpha_max], t_i ~ U(0, pi), t_j ~ t_i + U(0, pi).
    AS_PRINTED points with a vanishing denominator are counted, not compared.
    """
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    check_alpha(alpha_max, ep_guard)

    rng = np.random.default_rng(seed)
    alphas = rng.uniform(0.0, alpha_max, samples)
    t_is = rng.uniform(0.0, math.pi, samples)
    gaps = rng.uniform(0.0, math.pi, samples)

    worst = {variant: (0.0, None) for variant in ClosedFormVariant}
    singular = {variant: 0 for variant in ClosedFormVariant}
    compared = 0

    for alpha, t_i, gap in zip(alphas.tolist(), t_is.tolist(), gaps.tolist()):
        t_j = t_i + gap
        if not t_j > t_i:
            continue
        compared += 1
        reference = correlation_sim(alpha, t_i, t_j, ep_guard)
        for variant in ClosedFormVariant:
            try:
                value = correlation_closed(alpha, t_i, t_j, variant, ep_guard)
            except SingularDenominatorError:
                singular[variant] += 1
                continue
            deviation = abs(value - reference)
            if deviation > worst[variant][0]:
                worst[variant] = (deviation, (alpha, t_i, t_j))

    deviations = []
    for variant in ClosedFormVariant:
        deviation, point = worst[variant]
        alpha, t_i, t_j = point if point is not None else (None, None, None)
        deviations.append(
            VariantDeviation(
                variant=variant,
                max_abs_deviation=deviation,
                worst_alpha=alpha,
                worst_t_i=t_i,
                worst_t_j=t_j,
                singular_points=singular[variant],
                samples=compared,
            )
        )

    report = VerificationReport(tol=tol, seed=seed, alpha_max=alpha_max, deviations=deviations)
    logger.info(
        "Verified %d points: repaired max deviation %.3e, as-printed %.3e",
        compared,
        report.deviation(ClosedFormVariant.REPAIRED).max_abs_deviation,
        report.deviation(ClosedFormVariant.AS_PRINTED).max_abs_deviation,
    )
    return report
