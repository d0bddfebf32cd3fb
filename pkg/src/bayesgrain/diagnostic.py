"""
Diagnostic expectations in the Gaussian signal-extraction setting.

A state x ~ N(x̄, σ²) is observed through a signal s = x + ε with
ε ~ N(0, σ_ε²). A diagnostic agent overreacts to the signal: the posterior
mean moves by (1+θ)K(s − x̄) instead of K(s − x̄), where K is the Kalman gain,
while the posterior variance stays (1−K)σ². The same beliefs come out of
correct Bayesian updating under a subjective noise law whose mean is
negatively correlated with the state.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from bayesgrain.error import NegativeTheta, NonpositiveVariance
from bayesgrain.grain import GrainResult, contains_grain_parametric
from bayesgrain.measures import FloatArray, Normal

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussianPrior:
    mean: float
    variance: float

    def __post_init__(self) -> None:
        if not self.variance > 0:
            raise NonpositiveVariance("variance", self.variance)

    def as_normal(self) -> Normal:
        return Normal(self.mean, self.variance)


@dataclass(frozen=True)
class SignalNoise:
    variance: float

    def __post_init__(self) -> None:
        if not self.variance > 0:
            raise NonpositiveVariance("noise variance", self.variance)


class Centering(str, enum.Enum):
    """
    Where the subjective noise mean is anchored: at the raw state (literal)
    or at the state's deviation from the prior mean (centered).
    """

    LITERAL = "literal"
    CENTERED = "centered"


@dataclass(frozen=True)
class MisspecifiedSignalModel:
    """
    Subjective noise law ε | x ~ N(slope·(x − ref), noise_variance), with
    ref = 0 for the literal and ref = x̄ for the centered convention.
    """

    noise_mean_slope: float
    noise_variance: float
    centering: Centering = Centering.CENTERED

    def __post_init__(self) -> None:
        if not self.noise_variance > 0:
            raise NonpositiveVariance("subjective noise variance", self.noise_variance)


@dataclass(frozen=True)
class EquivalenceReport:
    """
    Worst-case gaps between the misspecified Bayesian posterior and the
    diagnostic posterior over a signal grid.
    """

    mean_deviation: float
    variance_deviation: float
    signals: int
    centering: Centering
    theta: float


def _check_theta(theta: float) -> None:
    if theta < 0:
        raise NegativeTheta(theta)


def kalman_gain(prior_variance: float, noise_variance: float) -> float:
    """
    K = σ² / (σ² + σ_ε²).
    """
    if not prior_variance > 0:
        raise NonpositiveVariance("variance", prior_variance)
    if not noise_variance > 0:
        raise NonpositiveVariance("noise variance", noise_variance)
    return prior_variance / (prior_variance + noise_variance)


def correct_posterior(
    prior: GaussianPrior, noise: SignalNoise, s: float
) -> GaussianPrior:
    """
    Bayesian posterior N(x̄ + K(s − x̄), (1−K)σ²).
    """
    gain = kalman_gain(prior.variance, noise.variance)
    return GaussianPrior(
        prior.mean + gain * (s - prior.mean), (1 - gain) * prior.variance
    )


def diagnostic_posterior(
    prior: GaussianPrior, noise: SignalNoise, s: float, theta: float
) -> GaussianPrior:
    """
    Diagnostic posterior N(x̄ + (1+θ)K(s − x̄), (1−K)σ²).
    """
    _check_theta(theta)
    gain = kalman_gain(prior.variance, noise.variance)
    return GaussianPrior(
        prior.mean + (1 + theta) * gain * (s - prior.mean), (1 - gain) * prior.variance
    )


def misspecified_model(
    theta: float, noise: SignalNoise, centering: Centering = Centering.CENTERED
) -> MisspecifiedSignalModel:
    """
    Subjective noise law with slope −θ/(1+θ) and variance σ_ε²/(1+θ)².
    """
    _check_theta(theta)
    return MisspecifiedSignalModel(
        -theta / (1 + theta), noise.variance / (1 + theta) ** 2, Centering(centering)
    )


def misspecified_posterior(
    prior: GaussianPrior, model: MisspecifiedSignalModel, s: float
) -> GaussianPrior:
    """
    Exact conjugate posterior of x given s when s = x + ε and ε follows the
    subjective noise law.

    Under the model s = a·x + b + η with a = 1 + slope, b = −slope·ref and
    η ~ N(0, v), so the posterior precision is 1/σ² + a²/v.
    """
    ref = prior.mean if model.centering is Centering.CENTERED else 0.0
    a = 1 + model.noise_mean_slope
    b = -model.noise_mean_slope * ref
    precision = 1 / prior.variance + a * a / model.noise_variance
    variance = 1 / precision
    mean = variance * (prior.mean / prior.variance + a * (s - b) / model.noise_variance)
    return GaussianPrior(mean, variance)


def signal_grid(lower: float, upper: float, step: float) -> FloatArray:
    """
    Evenly spaced signals from lower to upper inclusive.
    """
    if not step > 0 or upper < lower:
        raise ValueError("signal grid needs step > 0 and lower <= upper")
    count = int(round((upper - lower) / step)) + 1
    return np.linspace(lower, lower + (count - 1) * step, count)


def equivalence_report(
    prior: GaussianPrior,
    noise: SignalNoise,
    theta: float,
    centering: Centering = Centering.CENTERED,
    signals: Sequence[float] | FloatArray = (),
) -> EquivalenceReport:
    """
    Sweep the signal grid and report the largest gaps in posterior mean and
    variance between misspecified Bayesian and diagnostic updating.
    """
    model = misspecified_model(theta, noise, centering)
    mean_gap = 0.0
    variance_gap = 0.0
    for s in signals:
        bayes = misspecified_posterior(prior, model, float(s))
        diagnostic = diagnostic_posterior(prior, noise, float(s), theta)
        mean_gap = max(mean_gap, abs(bayes.mean - diagnostic.mean))
        variance_gap = max(variance_gap, abs(bayes.variance - diagnostic.variance))
    LOGGER.debug(
        "theta %s, %s centering: mean gap %.3g, variance gap %.3g",
        theta,
        model.centering.value,
        mean_gap,
        variance_gap,
    )
    return EquivalenceReport(
        mean_gap, variance_gap, len(signals), model.centering, theta
    )


def average_diagnostic_posterior(
    prior: GaussianPrior, noise: SignalNoise, theta: float, state: float
) -> Normal:
    """
    Average diagnostic posterior when the true state is ``state``: the mixture
    over s ~ N(x, σ_ε²), which is
    N(x̄ + (1+θ)K(x − x̄), (1−K)σ² + (1+θ)²K²σ_ε²).
    """
    _check_theta(theta)
    gain = kalman_gain(prior.variance, noise.variance)
    scaled = (1 + theta) * gain
    return Normal(
        prior.mean + scaled * (state - prior.mean),
        (1 - gain) * prior.variance + scaled * scaled * noise.variance,
    )


def diagnostic_grain_check(
    prior: GaussianPrior, noise: SignalNoise, theta: float, state: float
) -> GrainResult:
    """
    Whether the prior contains a grain of the average diagnostic posterior at
    the given true state.
    """
    average = average_diagnostic_posterior(prior, noise, theta, state)
    return contains_grain_parametric(prior.as_normal(), average)
