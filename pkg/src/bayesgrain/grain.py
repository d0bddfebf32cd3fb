"""
Grain relation between two laws: P contains a grain of Q when
P = εQ + (1−ε)Q′ for some ε in (0, 1] and some law Q′.

The relation is decided and certified by the maximal ratio c = sup dQ/dP,
with the canonical ε = 1/c. Tail comparisons decide the cases where the ratio
diverges at infinity.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TypeAlias

import numpy as np
import numpy.typing as npt
from scipy import integrate

from bayesgrain.error import InvalidParameterError, StateMismatch, UnsupportedPair
from bayesgrain.measures import (
    FLOAT_TOLERANCE,
    GRID_POINTS,
    MAX_LOG_FLOAT,
    FiniteDistribution,
    FloatArray,
    ParametricDistribution,
    Prob,
    is_close,
    log_density_ratio_sup,
    support_contained,
)

LOGGER = logging.getLogger(__name__)

# Survival ratio above which q counts as heavier-tailed at a given radius.
WITNESS_THRESHOLD = 1e6
PARAMETRIC_TOLERANCE = 1e-6
MAX_WITNESS_RADIUS = 1e6
TAIL_GRID_POINTS = 1_000


class Arbitrary(enum.Enum):
    """
    Marker for a residual that may be chosen freely (ε = 1).
    """

    ARBITRARY = "arbitrary"

    def __str__(self) -> str:
        return self.value


ARBITRARY = Arbitrary.ARBITRARY


@dataclass(frozen=True)
class GrainResidual:
    """
    Residual law of a parametric decomposition with density
    (p − εq) / (1 − ε), kept symbolic.
    """

    p: ParametricDistribution
    q: ParametricDistribution
    epsilon: float

    def pdf(self, x: npt.ArrayLike) -> FloatArray:
        values = np.asarray(x, dtype=np.float64)
        gap = self.p.pdf(values) - self.epsilon * self.q.pdf(values)
        return np.maximum(gap, 0.0) / (1 - self.epsilon)


Residual: TypeAlias = FiniteDistribution | GrainResidual | Arbitrary


@dataclass(frozen=True)
class GrainCertificate:
    """
    Witness of P = εQ + (1−ε)·residual.

    Attributes:
        epsilon: Grain weight in (0, 1].
        c: Bound on the density ratio dQ/dP, equal to 1/ε.
        residual: The residual law, or ``ARBITRARY`` when ε = 1.
    """

    epsilon: Prob
    c: Prob
    residual: Residual

    @property
    def exact(self) -> bool:
        return isinstance(self.epsilon, Fraction)


class NoGrainReason(str, enum.Enum):
    SUPPORT_VIOLATION = "SupportViolation"
    UNBOUNDED_RATIO = "UnboundedRatio"


@dataclass(frozen=True)
class NoGrain:
    """
    Refutation of the grain relation.

    Attributes:
        reason: Why no grain exists.
        witness_state: A state where q is positive and p is zero (finite laws).
        radius: A radius beyond which the survival ratio exceeds
            ``WITNESS_THRESHOLD`` (unbounded ratios).
    """

    reason: NoGrainReason
    witness_state: str | None = None
    radius: float | None = None


GrainResult: TypeAlias = GrainCertificate | NoGrain


class TailRelation(str, enum.Enum):
    Q_HEAVIER = "QHeavier"
    P_HEAVIER = "PHeavier"
    COMPARABLE = "Comparable"


@dataclass(frozen=True)
class TailVerdict:
    """
    Outcome of a tail comparison of q against p.

    Attributes:
        relation: Which law has the heavier tail.
        c: For comparable tails, a bound with Q(|x|>r) <= c·P(|x|>r) on the
            test grid.
        witness: For heavier q, a radius where the survival ratio exceeds
            ``WITNESS_THRESHOLD``.
    """

    relation: TailRelation
    c: float | None = None
    witness: float | None = None


@dataclass(frozen=True)
class CertificateReport:
    """
    Result of checking a grain certificate. Truthy when every check passed.
    """

    identity: bool
    residual_valid: bool
    messages: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.identity and self.residual_valid

    def __bool__(self) -> bool:
        return self.passed


def _check_states(p: FiniteDistribution, q: FiniteDistribution) -> None:
    if p.states != q.states:
        raise StateMismatch(p.states, q.states)


def max_ratio_finite(p: FiniteDistribution, q: FiniteDistribution) -> Prob:
    """
    The smallest c with q <= c·p state by state, ``math.inf`` when q puts mass
    on a state p excludes.
    """
    _check_states(p, q)
    exact = p.exact and q.exact
    c: Prob = Fraction(1) if exact else 1.0
    for p_x, q_x in zip(p.probs, q.probs, strict=True):
        if q_x <= 0:
            continue
        if p_x <= 0:
            return math.inf
        ratio = q_x / p_x if exact else float(q_x) / float(p_x)
        c = max(c, ratio)
    return c


def _residual(
    p: FiniteDistribution, q: FiniteDistribution, epsilon: Prob
) -> FiniteDistribution:
    if isinstance(epsilon, Fraction) and p.exact and q.exact:
        probs: tuple[Prob, ...] = tuple(
            (p_x - epsilon * q_x) / (1 - epsilon)
            for p_x, q_x in zip(p.probs, q.probs, strict=True)
        )
    else:
        eps = float(epsilon)
        if eps >= 1.0:
            raise InvalidParameterError("a grain of weight 1 leaves no residual")
        # scaled by c = 1/ε so that ε near 1 does not cancel p against εq
        c = 1.0 / eps
        raw = [
            max(0.0, (c * float(p_x) - float(q_x)) / (c - 1.0))
            for p_x, q_x in zip(p.probs, q.probs, strict=True)
        ]
        total = math.fsum(raw)
        if total <= 0.0:
            raise InvalidParameterError(f"empty residual at epsilon = {eps}")
        probs = tuple(r / total for r in raw)
    return FiniteDistribution(p.states, probs)


def _is_one(value: Prob) -> bool:
    if isinstance(value, Fraction):
        return value == 1
    return abs(value - 1.0) <= FLOAT_TOLERANCE


def grain_decompose_finite(p: FiniteDistribution, q: FiniteDistribution) -> GrainResult:
    """
    Decompose p as εq + (1−ε)q′ with the maximal ε.

    Args:
        p: The containing law.
        q: The law whose grain is sought.

    Returns:
        A certificate with ε = 1/c and c = max q/p over the support of p, or
        NoGrain naming the first state where q is positive and p is zero.
    """
    _check_states(p, q)
    for state, p_x, q_x in zip(p.states, p.probs, q.probs, strict=True):
        if q_x > 0 and p_x <= 0:
            LOGGER.debug("No grain: state %s has q = %s and p = 0", state, q_x)
            return NoGrain(NoGrainReason.SUPPORT_VIOLATION, witness_state=state)
    c = max_ratio_finite(p, q)
    if _is_one(c):
        one: Prob = Fraction(1) if isinstance(c, Fraction) else 1.0
        return GrainCertificate(one, one, ARBITRARY)
    epsilon = 1 / c
    LOGGER.debug("Finite grain with c = %s, epsilon = %s", c, epsilon)
    return GrainCertificate(epsilon, c, _residual(p, q, epsilon))


def certificate_with_epsilon(
    p: FiniteDistribution, q: FiniteDistribution, epsilon: Prob
) -> GrainCertificate:
    """
    Certificate for a given ε no larger than the maximal one, with the
    residual recomputed for that ε.
    """
    _check_states(p, q)
    c_max = max_ratio_finite(p, q)
    if c_max == math.inf:
        raise InvalidParameterError("p contains no grain of q")
    slack = 0 if isinstance(epsilon, Fraction) else FLOAT_TOLERANCE
    if not 0 < epsilon <= 1 / c_max + slack:
        raise InvalidParameterError(
            f"epsilon must lie in (0, {1 / c_max}], got {epsilon}"
        )
    if _is_one(epsilon):
        return GrainCertificate(epsilon, 1 / epsilon, ARBITRARY)
    return GrainCertificate(epsilon, 1 / epsilon, _residual(p, q, epsilon))


def _verify_finite(
    p: FiniteDistribution, q: FiniteDistribution, cert: GrainCertificate
) -> CertificateReport:
    if p.states != q.states:
        return CertificateReport(False, False, ("p and q use different states",))
    eps = cert.epsilon
    exact = p.exact and q.exact and isinstance(eps, Fraction)
    tol = None if exact else FLOAT_TOLERANCE
    if not 0 < eps <= 1:
        return CertificateReport(False, False, (f"epsilon {eps} outside (0, 1]",))
    messages: list[str] = []
    identity = is_close(eps * cert.c, 1 if exact else 1.0, tol)
    if not identity:
        messages.append(f"epsilon * c = {eps * cert.c}, expected 1")

    if isinstance(cert.residual, Arbitrary):
        if not _is_one(eps):
            return CertificateReport(
                False, False, ("arbitrary residual needs epsilon = 1",)
            )
        if not p.isclose(q):
            identity = False
            messages.append("epsilon = 1 but p differs from q")
        return CertificateReport(identity, True, tuple(messages))

    if (
        not isinstance(cert.residual, FiniteDistribution)
        or cert.residual.states != p.states
    ):
        return CertificateReport(
            False, False, ("residual is not a law over the states of p",)
        )

    residual = cert.residual
    residual_valid = True
    for state, p_x, q_x, r_x in zip(
        p.states, p.probs, q.probs, residual.probs, strict=True
    ):
        if exact:
            mixed: Prob = eps * q_x + (1 - eps) * r_x
        else:
            mixed = float(eps) * float(q_x) + (1 - float(eps)) * float(r_x)
        if not is_close(mixed, p_x, tol):
            identity = False
            messages.append(
                f"state {state}: eps*q + (1-eps)*residual = {mixed}, p = {p_x}"
            )
        implied = p_x - eps * q_x if exact else float(p_x) - float(eps) * float(q_x)
        if implied < (0 if exact else -FLOAT_TOLERANCE):
            residual_valid = False
            messages.append(f"state {state}: negative implied residual mass {implied}")
    return CertificateReport(identity, residual_valid, tuple(messages))


def _verification_grid(
    p: ParametricDistribution, q: ParametricDistribution
) -> FloatArray:
    p_lo, p_hi = p.coverage_interval()
    q_lo, q_hi = q.coverage_interval()
    return np.union1d(
        np.linspace(p_lo, p_hi, GRID_POINTS), np.linspace(q_lo, q_hi, GRID_POINTS)
    )


def _verify_parametric(
    p: ParametricDistribution, q: ParametricDistribution, cert: GrainCertificate
) -> CertificateReport:
    eps = float(cert.epsilon)
    if not 0 < eps <= 1:
        return CertificateReport(False, False, (f"epsilon {eps} outside (0, 1]",))
    if not math.isclose(eps * float(cert.c), 1.0, rel_tol=PARAMETRIC_TOLERANCE):
        return CertificateReport(False, False, ("epsilon * c differs from 1",))
    if p.atomic or q.atomic:
        return CertificateReport(
            False, False, ("atomic laws are not certified on a grid",)
        )

    grid = _verification_grid(p, q)
    log_p, log_q = p.logpdf(grid), q.logpdf(grid)
    if isinstance(cert.residual, Arbitrary):
        identity = eps == 1 and bool(
            np.all(np.abs(np.exp(log_q) - np.exp(log_p)) <= PARAMETRIC_TOLERANCE)
        )
        messages = () if identity else ("epsilon = 1 but the densities differ",)
        return CertificateReport(identity, True, messages)
    if not isinstance(cert.residual, GrainResidual) or (
        cert.residual.p != p or cert.residual.q != q or cert.residual.epsilon != eps
    ):
        return CertificateReport(
            False, False, ("residual does not belong to (p, q, epsilon)",)
        )

    # eps*q <= p everywhere makes (p - eps*q)/(1 - eps) a density of mass 1
    excess = math.log(eps) + log_q - log_p
    positive = log_q > -math.inf
    identity = bool(np.all(excess[positive] <= math.log1p(PARAMETRIC_TOLERANCE)))
    messages: list[str] = []
    if not identity:
        worst = int(np.argmax(np.where(positive, excess, -np.inf)))
        messages.append(f"eps*q exceeds p at x = {grid[worst]}")

    q_lo, q_hi = q.coverage_interval()
    violation, _ = integrate.quad(
        lambda x: max(eps * float(q.pdf(x)) - float(p.pdf(x)), 0.0),
        q_lo,
        q_hi,
        limit=200,
    )
    mass = 1 + violation / (1 - eps)
    residual_valid = abs(mass - 1) <= PARAMETRIC_TOLERANCE
    if not residual_valid:
        messages.append(f"residual mass {mass}, expected 1")
    return CertificateReport(identity, residual_valid, tuple(messages))


def verify_certificate(
    p: FiniteDistribution | ParametricDistribution,
    q: FiniteDistribution | ParametricDistribution,
    cert: GrainCertificate,
) -> CertificateReport:
    """
    Check P = εQ + (1−ε)·residual by substitution.

    Finite laws are checked state by state, exactly in rational mode. Parametric
    laws are checked on a 10⁴-point grid to 1e-6, and the residual mass is
    integrated numerically.

    Returns:
        A report; failures are reported rather than raised.
    """
    if isinstance(p, FiniteDistribution) and isinstance(q, FiniteDistribution):
        report = _verify_finite(p, q, cert)
    elif isinstance(p, ParametricDistribution) and isinstance(
        q, ParametricDistribution
    ):
        report = _verify_parametric(p, q, cert)
    else:
        report = CertificateReport(
            False, False, ("p and q use different representations",)
        )
    LOGGER.debug("Certificate check: %s", report)
    return report


def _log_survival_ratio(
    p: ParametricDistribution, q: ParametricDistribution, r: float
) -> float:
    log_q, log_p = q.log_abs_tail(r), p.log_abs_tail(r)
    if log_q == -math.inf:
        return -math.inf
    if log_p == -math.inf:
        return math.inf
    return log_q - log_p


def divergence_radius(
    p: ParametricDistribution, q: ParametricDistribution
) -> float | None:
    """
    Smallest radius, up to bisection precision, where Q(|x|>r) / P(|x|>r)
    exceeds ``WITNESS_THRESHOLD``. None if no radius below
    ``MAX_WITNESS_RADIUS`` qualifies.
    """
    threshold = math.log(WITNESS_THRESHOLD)
    if _log_survival_ratio(p, q, 0.0) > threshold:
        return 0.0
    lo, hi = 0.0, 1.0
    while _log_survival_ratio(p, q, hi) <= threshold:
        lo, hi = hi, hi * 2
        if hi > MAX_WITNESS_RADIUS:
            return None
    for _ in range(60):
        mid = (lo + hi) / 2
        if _log_survival_ratio(p, q, mid) > threshold:
            hi = mid
        else:
            lo = mid
    return hi


def _radius(dist: ParametricDistribution) -> float:
    lo, hi = dist.support()
    if not (math.isfinite(lo) and math.isfinite(hi)):
        lo, hi = dist.coverage_interval()
    return max(abs(lo), abs(hi))


def _grid_survival_bound(p: ParametricDistribution, q: ParametricDistribution) -> float:
    radius = max(_radius(p), _radius(q))
    ratios = [
        _log_survival_ratio(p, q, r) for r in np.linspace(0.0, radius, TAIL_GRID_POINTS)
    ]
    worst = max(ratios)
    return max(1.0, math.exp(min(worst, MAX_LOG_FLOAT)))


def tail_order_compare(
    p: ParametricDistribution, q: ParametricDistribution
) -> TailVerdict:
    """
    Compare the tails of |x| under q against those under p.

    Tail classes decide the relation; tied classes are Comparable with a
    survival-ratio bound computed on a radius grid. A bounded q against an
    unbounded p is Comparable as well.
    """
    q_bounded = all(math.isfinite(b) for b in q.support())
    p_bounded = all(math.isfinite(b) for b in p.support())
    if q_bounded and p_bounded:
        if _radius(q) > _radius(p):
            return TailVerdict(TailRelation.Q_HEAVIER, witness=_radius(p))
        return TailVerdict(TailRelation.COMPARABLE, c=_grid_survival_bound(p, q))
    if q_bounded:
        return TailVerdict(TailRelation.COMPARABLE, c=_grid_survival_bound(p, q))

    order = q.tail_class().compare(p.tail_class())
    if order > 0:
        witness = divergence_radius(p, q)
        LOGGER.debug("%r has heavier tails than %r, witness radius %s", q, p, witness)
        return TailVerdict(TailRelation.Q_HEAVIER, witness=witness)
    if order < 0:
        return TailVerdict(TailRelation.P_HEAVIER)
    return TailVerdict(TailRelation.COMPARABLE, c=_grid_survival_bound(p, q))


def contains_grain_parametric(
    p: ParametricDistribution, q: ParametricDistribution
) -> GrainResult:
    """
    Decide whether p contains a grain of q via the density ratio bound.

    Args:
        p: The containing law, non-atomic.
        q: The law whose grain is sought. A point mass never is a grain of a
            non-atomic law.

    Returns:
        A certificate with ε = 1/sup(dq/dp) and a symbolic residual, or
        NoGrain with the reason.

    Raises:
        UnsupportedPair: for atomic p, or a finite ratio beyond float range.
    """
    if p.atomic:
        raise UnsupportedPair(q, p)
    if q.atomic or not support_contained(q, p):
        return NoGrain(NoGrainReason.SUPPORT_VIOLATION)
    log_c = log_density_ratio_sup(q, p)
    if log_c == math.inf:
        return NoGrain(NoGrainReason.UNBOUNDED_RATIO, radius=divergence_radius(p, q))
    if log_c >= MAX_LOG_FLOAT:
        raise UnsupportedPair(q, p)
    c = max(1.0, math.exp(log_c))
    if c == 1.0:
        return GrainCertificate(1.0, 1.0, ARBITRARY)
    epsilon = 1 / c
    return GrainCertificate(epsilon, c, GrainResidual(p, q, epsilon))
