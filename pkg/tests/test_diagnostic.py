import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bayesgrain.diagnostic import (
    Centering,
    GaussianPrior,
    MisspecifiedSignalModel,
    SignalNoise,
    average_diagnostic_posterior,
    correct_posterior,
    diagnostic_grain_check,
    diagnostic_posterior,
    equivalence_report,
    kalman_gain,
    misspecified_model,
    misspecified_posterior,
    signal_grid,
)
from bayesgrain.error import NegativeTheta, NonpositiveVariance
from bayesgrain.grain import GrainCertificate, NoGrain, NoGrainReason

STANDARD = GaussianPrior(0.0, 1.0)
UNIT_NOISE = SignalNoise(1.0)


def test_kalman_gain() -> None:
    assert kalman_gain(1.0, 1.0) == 0.5
    assert kalman_gain(3.0, 1.0) == 0.75
    with pytest.raises(NonpositiveVariance):
        kalman_gain(0.0, 1.0)
    with pytest.raises(NonpositiveVariance):
        kalman_gain(1.0, -1.0)


def test_diagnostic_without_theta_is_correct() -> None:
    prior = GaussianPrior(1.0, 2.0)
    noise = SignalNoise(0.5)
    expected = correct_posterior(prior, noise, 3.0)
    assert diagnostic_posterior(prior, noise, 3.0, 0.0) == expected


def test_misspecified_model_parameters() -> None:
    model = misspecified_model(1.0, SignalNoise(4.0))
    assert model == MisspecifiedSignalModel(-0.5, 1.0, Centering.CENTERED)


@pytest.mark.parametrize("theta", [0.0, 0.5, 1.0, 2.0])
def test_equivalence_on_acceptance_grid(theta: float) -> None:
    report = equivalence_report(
        STANDARD, UNIT_NOISE, theta, signals=signal_grid(-5.0, 5.0, 0.1)
    )
    assert report.signals == 101
    assert report.mean_deviation < 1e-12
    assert report.variance_deviation < 1e-12


@pytest.mark.parametrize("centering", [Centering.CENTERED, Centering.LITERAL])
def test_equivalence_with_zero_prior_mean(centering: Centering) -> None:
    report = equivalence_report(
        GaussianPrior(0.0, 2.0),
        SignalNoise(0.5),
        1.5,
        centering,
        signal_grid(-3, 3, 0.5),
    )
    assert report.mean_deviation < 1e-12


def test_literal_centering_drifts_with_prior_mean() -> None:
    prior = GaussianPrior(2.0, 1.0)
    theta = 1.0
    report = equivalence_report(
        prior, UNIT_NOISE, theta, Centering.LITERAL, signal_grid(-5, 5, 0.1)
    )
    # the gap is theta * K * prior mean at every signal
    assert report.mean_deviation == pytest.approx(theta * 0.5 * prior.mean)
    assert report.variance_deviation < 1e-12
    centered = equivalence_report(
        prior, UNIT_NOISE, theta, Centering.CENTERED, signal_grid(-5, 5, 0.1)
    )
    assert centered.mean_deviation < 1e-12


@given(
    st.floats(-3, 3),
    st.floats(0.1, 5),
    st.floats(0.1, 5),
    st.floats(0, 4),
    st.floats(-10, 10),
)
def test_misspecified_posterior_matches_diagnostic(
    mean: float, variance: float, noise_variance: float, theta: float, s: float
) -> None:
    prior = GaussianPrior(mean, variance)
    noise = SignalNoise(noise_variance)
    bayes = misspecified_posterior(prior, misspecified_model(theta, noise), s)
    diagnostic = diagnostic_posterior(prior, noise, s, theta)
    assert bayes.mean == pytest.approx(diagnostic.mean, abs=1e-9)
    assert bayes.variance == pytest.approx(diagnostic.variance, rel=1e-12)


def test_negative_theta() -> None:
    with pytest.raises(NegativeTheta):
        misspecified_model(-0.1, UNIT_NOISE)
    with pytest.raises(NegativeTheta):
        diagnostic_posterior(STANDARD, UNIT_NOISE, 0.0, -1.0)


def test_nonpositive_variances() -> None:
    with pytest.raises(NonpositiveVariance):
        GaussianPrior(0.0, 0.0)
    with pytest.raises(NonpositiveVariance):
        SignalNoise(-1.0)
    with pytest.raises(NonpositiveVariance):
        MisspecifiedSignalModel(0.0, 0.0)


def test_signal_grid() -> None:
    grid = signal_grid(-1.0, 1.0, 0.5)
    np.testing.assert_allclose(grid, [-1.0, -0.5, 0.0, 0.5, 1.0])
    with pytest.raises(ValueError):
        signal_grid(1.0, 0.0, 0.1)


def test_average_diagnostic_posterior() -> None:
    average = average_diagnostic_posterior(STANDARD, UNIT_NOISE, 1.0, 2.0)
    assert average.mean == pytest.approx(2.0)
    assert average.variance == pytest.approx(1.5)


def test_grain_of_average_diagnostic_posterior() -> None:
    cert = diagnostic_grain_check(STANDARD, UNIT_NOISE, 0.0, 0.0)
    assert isinstance(cert, GrainCertificate)
    # N(0, 3/4) against N(0, 1)
    assert cert.c == pytest.approx(math.sqrt(4 / 3))


def test_overreaction_spreads_beyond_prior() -> None:
    result = diagnostic_grain_check(STANDARD, UNIT_NOISE, 1.0, 0.0)
    assert isinstance(result, NoGrain)
    assert result.reason is NoGrainReason.UNBOUNDED_RATIO
