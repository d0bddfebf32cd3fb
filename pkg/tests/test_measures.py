import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from bayesgrain.error import (
    InvalidParameterError,
    MixedRepresentation,
    UnsupportedPair,
    ValidationError,
    ZeroMassCell,
)
from bayesgrain.measures import (
    COMPACT_TAIL,
    EnsembleEntry,
    Exponential,
    FiniteDistribution,
    FiniteEnsemble,
    Laplace,
    Mixture,
    Normal,
    Orientation,
    ParametricDistribution,
    PointMass,
    PointMassFamily,
    TailClass,
    TailKind,
    Truncated,
    Uniform,
    average_posterior,
    cell_average_posterior,
    density_curve,
    density_ratio_sup,
    heaviest,
    log_density_ratio_sup,
    mixture,
    tail_probability,
    to_prob,
)
from tests.conftest import exact_distributions, labels

RIGHT = Exponential(1.0, Orientation.RIGHT)
MIRRORED = Exponential(1.0, Orientation.MIRRORED)


@pytest.mark.parametrize(
    ["value", "exact", "expected"],
    [
        pytest.param("10/19", True, Fraction(10, 19), id="rational-string"),
        pytest.param(0.8, True, Fraction(4, 5), id="float-shortest-decimal"),
        pytest.param("1/4", False, 0.25, id="float-mode"),
        pytest.param(3, True, Fraction(3), id="int"),
    ],
)
def test_to_prob(value: object, exact: bool, expected: object) -> None:
    result = to_prob(value, exact)
    assert result == expected
    assert isinstance(result, Fraction) == exact


def test_to_prob_rejects_booleans() -> None:
    with pytest.raises(TypeError):
        to_prob(True, exact=True)


@pytest.mark.parametrize(
    ["probs", "field"],
    [
        pytest.param((Fraction(1, 2), Fraction(1, 4)), "probs", id="mass-below-one"),
        pytest.param((Fraction(3, 2), Fraction(-1, 2)), "probs", id="negative"),
        pytest.param((Fraction(1),), "probs", id="length-mismatch"),
    ],
)
def test_finite_distribution_invalid(probs: tuple[Fraction, ...], field: str) -> None:
    with pytest.raises(ValidationError) as exc:
        FiniteDistribution(("H", "L"), probs)
    assert exc.value.field_path == field


def test_finite_distribution_duplicate_states() -> None:
    with pytest.raises(ValidationError):
        FiniteDistribution(("H", "H"), (Fraction(1, 2), Fraction(1, 2)))


def test_finite_distribution_accessors() -> None:
    dist = FiniteDistribution.from_values(("H", "L"), ["1", "0"])
    assert dist.exact
    assert dist.prob("H") == 1
    assert dist.support() == frozenset({"H"})
    assert str(dist) == "(1, 0)"
    assert dist.isclose(FiniteDistribution(("H", "L"), (1.0, 0.0)))
    np.testing.assert_array_equal(dist.as_floats(), [1.0, 0.0])


def test_average_posterior_two_state(two_state_ensemble: FiniteEnsemble) -> None:
    average = average_posterior(two_state_ensemble)
    assert average == FiniteDistribution(
        ("H", "L"), (Fraction(19, 20), Fraction(1, 20))
    )


def test_average_posterior_single_posterior() -> None:
    mu = FiniteDistribution(
        ("a", "b", "c"), (Fraction(1, 3), Fraction(2, 3), Fraction(0))
    )
    assert average_posterior(FiniteEnsemble.of((mu, Fraction(1)))) == mu


def test_average_posterior_exponential_pair_is_laplace() -> None:
    ensemble = FiniteEnsemble.of((RIGHT, 0.5), (MIRRORED, 0.5))
    assert average_posterior(ensemble) == Laplace(0.0, 1.0)


def test_average_posterior_generic_mixture() -> None:
    ensemble = FiniteEnsemble.of((Normal(0, 1), 0.25), (Normal(2, 1), 0.75))
    average = average_posterior(ensemble)
    assert isinstance(average, Mixture)
    expected = 0.25 * float(Normal(0, 1).pdf(1.0)) + 0.75 * float(Normal(2, 1).pdf(1.0))
    assert float(average.pdf(1.0)) == pytest.approx(expected)


def test_average_posterior_cell(two_state_ensemble: FiniteEnsemble) -> None:
    second = two_state_ensemble.posteriors[1]
    assert average_posterior(two_state_ensemble, [1]) == second


def test_average_posterior_mixed_representation(
    two_state_prior: FiniteDistribution
) -> None:
    ensemble = FiniteEnsemble.of((two_state_prior, 0.5), (Normal(0, 1), 0.5))
    with pytest.raises(MixedRepresentation):
        average_posterior(ensemble)


def test_average_posterior_point_mass_family() -> None:
    with pytest.raises(MixedRepresentation):
        average_posterior(PointMassFamily(Laplace(0, 1)))


def test_ensemble_invariants(two_state_prior: FiniteDistribution) -> None:
    other = FiniteDistribution(("H", "L"), (Fraction(1), Fraction(0)))
    with pytest.raises(ValidationError) as exc:
        FiniteEnsemble.of((two_state_prior, Fraction(1, 2)), (other, Fraction(2, 5)))
    assert exc.value.field_path == "ensemble.weights"
    with pytest.raises(ValidationError):
        FiniteEnsemble.of(
            (two_state_prior, Fraction(1, 2)), (two_state_prior, Fraction(1, 2))
        )
    with pytest.raises(ValidationError):
        FiniteEnsemble(())


def test_ensemble_default_labels(two_state_prior: FiniteDistribution) -> None:
    other = FiniteDistribution(("H", "L"), (Fraction(1), Fraction(0)))
    ensemble = FiniteEnsemble(
        (
            EnsembleEntry(two_state_prior, Fraction(1, 2)),
            EnsembleEntry(other, Fraction(1, 2), "b"),
        )
    )
    assert ensemble.labels() == ("s1", "b")


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda n: st.tuples(
            st.lists(exact_distributions(3), min_size=n, max_size=n, unique=True),
            st.lists(st.integers(1, 9), min_size=n, max_size=n),
            st.lists(st.integers(0, 2), min_size=n, max_size=n),
        )
    )
)
def test_average_posterior_partition_identity(
    drawn: tuple[list[FiniteDistribution], list[int], list[int]],
) -> None:
    posteriors, counts, cell_ids = drawn
    total = sum(counts)
    ensemble = FiniteEnsemble.of(
        *((p, Fraction(c, total)) for p, c in zip(posteriors, counts, strict=True))
    )
    combined = [Fraction(0)] * 3
    for cell_id in set(cell_ids):
        cell = [i for i, k in enumerate(cell_ids) if k == cell_id]
        cell_weight = sum(ensemble.weights[i] for i in cell)
        cell_average = average_posterior(ensemble, cell)
        assert isinstance(cell_average, FiniteDistribution)
        for i, p in enumerate(cell_average.probs):
            combined[i] += cell_weight * p
    assert average_posterior(ensemble) == FiniteDistribution(labels(3), tuple(combined))


def test_cell_average_posterior_truncates() -> None:
    family = PointMassFamily(Laplace(0, 1))
    assert cell_average_posterior(family, 1, 2) == Truncated(Laplace(0, 1), 1, 2)


def test_cell_average_posterior_whole_line() -> None:
    family = PointMassFamily(Normal(0, 1))
    assert cell_average_posterior(family, -math.inf, math.inf) == Normal(0, 1)


def test_cell_average_posterior_zero_mass() -> None:
    with pytest.raises(ZeroMassCell):
        cell_average_posterior(PointMassFamily(RIGHT), -2, -1)


@pytest.mark.parametrize(
    "dist",
    [
        pytest.param(Normal(0.5, 2.0), id="normal"),
        pytest.param(Laplace(-1.0, 0.5), id="laplace"),
        pytest.param(RIGHT, id="exponential"),
        pytest.param(MIRRORED, id="mirrored-exponential"),
        pytest.param(Uniform(-1.0, 3.0), id="uniform"),
        pytest.param(Truncated(Laplace(0, 1), 1, 2), id="truncated"),
        pytest.param(
            mixture([(0.3, Normal(0, 1)), (0.7, Laplace(2, 1))]), id="mixture"
        ),
    ],
)
def test_density_integrates_to_one(dist: ParametricDistribution) -> None:
    lo, hi = dist.support()
    total, _ = integrate.quad(lambda x: float(dist.pdf(x)), lo, hi, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize(
    "make",
    [
        pytest.param(lambda: Normal(0, 0), id="zero-variance"),
        pytest.param(lambda: Laplace(0, -1), id="negative-scale"),
        pytest.param(lambda: Exponential(0.0), id="zero-rate"),
        pytest.param(lambda: Uniform(1, 1), id="empty-uniform"),
        pytest.param(lambda: Truncated(Normal(0, 1), 2, 1), id="reversed-interval"),
        pytest.param(lambda: Mixture(((0.5, Normal(0, 1)),)), id="mixture-mass"),
    ],
)
def test_invalid_parameters(make: object) -> None:
    with pytest.raises(InvalidParameterError):
        make()  # type: ignore[operator]


def test_truncation_without_mass() -> None:
    with pytest.raises(ZeroMassCell):
        Truncated(RIGHT, -2, -1)


def test_density_ratio_laplace_against_normal() -> None:
    assert density_ratio_sup(Laplace(0, 1), Normal(0, 1)) == math.inf


def test_density_ratio_identical() -> None:
    assert density_ratio_sup(Normal(0, 1), Normal(0, 1)) == pytest.approx(1.0)


def test_density_ratio_truncated_laplace_against_normal() -> None:
    q = Truncated(Laplace(0, 1), 1, 2)
    p = Normal(0, 1)
    grid = np.linspace(1, 2, 10_001)[:-1]
    on_grid = float(np.max(q.pdf(grid) / p.pdf(grid)))
    # the ratio increases on [1, 2), its supremum is the limit at 2
    limit = math.exp(
        float(Laplace(0, 1).logpdf(2.0)) - q.log_norm - float(p.logpdf(2.0))
    )
    c = density_ratio_sup(q, p)
    assert c == pytest.approx(limit, rel=1e-9)
    assert on_grid <= c * (1 + 1e-9)


def test_density_ratio_support_violation() -> None:
    assert density_ratio_sup(Normal(0, 1), RIGHT) == math.inf
    assert density_ratio_sup(Uniform(-1, 1), Uniform(0, 2)) == math.inf


def test_density_ratio_grid_path() -> None:
    q = mixture([(0.5, Normal(0, 1)), (0.5, Normal(1, 1))])
    c = density_ratio_sup(q, Normal(0, 4))
    assert math.isfinite(c)
    assert c >= 1


def test_density_ratio_rejects_atoms() -> None:
    with pytest.raises(UnsupportedPair):
        density_ratio_sup(PointMass(0.0), Normal(0, 1))


def test_density_ratio_beyond_float_range() -> None:
    q = Truncated(Normal(0, 1), 40, 41)
    p = Truncated(Normal(0, 1), -100, 100)
    assert density_ratio_sup(q, p) == math.inf
    assert math.isfinite(log_density_ratio_sup(q, p))


@pytest.mark.parametrize(
    ["q", "p"],
    [
        pytest.param(Normal(0, 1), Normal(0, 2), id="normal-wider-normal"),
        pytest.param(Laplace(0, 0.5), Laplace(0, 1), id="laplace-wider-laplace"),
        pytest.param(Truncated(Laplace(0, 1), 1, 2), Normal(0, 1), id="truncated"),
        pytest.param(Uniform(0, 1), Normal(0, 1), id="uniform-normal"),
    ],
)
def test_density_ratio_dominates(
    q: ParametricDistribution, p: ParametricDistribution
) -> None:
    c = density_ratio_sup(q, p)
    assert math.isfinite(c)
    lo, hi = q.coverage_interval()
    total, _ = integrate.quad(
        lambda x: min(float(q.pdf(x)), c * float(p.pdf(x))), lo, hi, limit=200
    )
    assert total == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize(
    ["dist", "r", "expected"],
    [
        pytest.param(Normal(0, 1), 0.0, 1.0, id="normal-full-mass"),
        pytest.param(Laplace(0, 1), 1.0, math.exp(-1), id="laplace"),
        pytest.param(RIGHT, 2.0, math.exp(-2), id="exponential"),
    ],
)
def test_tail_probability(
    dist: ParametricDistribution, r: float, expected: float
) -> None:
    assert tail_probability(dist, r) == pytest.approx(expected, rel=1e-12)
    upper, _ = integrate.quad(lambda x: float(dist.pdf(x)), r, math.inf)
    lower, _ = integrate.quad(lambda x: float(dist.pdf(x)), -math.inf, -r)
    assert upper + lower == pytest.approx(expected, abs=1e-8)


def test_tail_probability_negative_radius() -> None:
    with pytest.raises(InvalidParameterError):
        tail_probability(Normal(0, 1), -1.0)


@pytest.mark.parametrize(
    "dist",
    [Normal(1, 2), Laplace(0, 1), MIRRORED, Truncated(Laplace(0, 1), 1, 2)],
)
def test_tail_probability_nonincreasing(dist: ParametricDistribution) -> None:
    values = [tail_probability(dist, r) for r in np.linspace(0, 8, 161)]
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:], strict=False))


def test_tail_class_order() -> None:
    gaussian = Normal(0, 1).tail_class()
    exponential = Laplace(0, 1).tail_class()
    lighter_exponential = Laplace(0, 0.5).tail_class()
    polynomial = TailClass(TailKind.POLYNOMIAL, 2.0)
    assert COMPACT_TAIL.compare(gaussian) < 0
    assert gaussian.compare(exponential) < 0
    assert exponential.compare(polynomial) < 0
    assert lighter_exponential.compare(exponential) < 0
    assert heaviest([gaussian, polynomial, exponential]) == polynomial
    assert Uniform(0, 1).tail_class() == COMPACT_TAIL


def test_mixture_merges_duplicates() -> None:
    assert mixture([(0.5, Normal(0, 1)), (0.5, Normal(0, 1))]) == Normal(0, 1)


def test_density_curve() -> None:
    curve = density_curve("prior", Normal(0, 1), -1, 1, 3)
    np.testing.assert_allclose(curve.xs, [-1, 0, 1])
    assert curve.values[1] == pytest.approx(1 / math.sqrt(2 * math.pi))
