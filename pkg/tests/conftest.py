import argparse
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from bayesgrain.cli import setup_arg_parser
from bayesgrain.instance import ProblemInstance, load_instance
from bayesgrain.measures import (
    EnsembleEntry,
    FiniteDistribution,
    FiniteEnsemble,
    average_posterior,
)

DATA_DIR = Path("tests/data")
TWO_STATE = DATA_DIR / "two_state.json"
EXPONENTIAL_PAIR = DATA_DIR / "exponential_pair.json"
LAPLACE_LOCATIONS = DATA_DIR / "laplace_locations.json"
TWO_STATE_MODEL = DATA_DIR / "two_state_model.json"
TWO_STATE_PANEL = DATA_DIR / "two_state_panel.csv"


def cli_args(*argv: str | Path) -> argparse.Namespace:
    """
    Parse a command line the way the bayesgrain entry point does.
    """
    return setup_arg_parser().parse_args([str(arg) for arg in argv])


def labels(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


def random_vector(
    rng: np.random.Generator, n: int, full_support: bool, denominator: int = 12
) -> tuple[Fraction, ...]:
    """
    Random exact probability vector with small denominators.
    """
    while True:
        low = 1 if full_support else 0
        counts = rng.integers(low, denominator, size=n)
        total = int(counts.sum())
        if total > 0:
            return tuple(Fraction(int(c), total) for c in counts)


def random_ensemble(
    rng: np.random.Generator, states: int, posteriors: int
) -> FiniteEnsemble:
    """
    Random finite ensemble of pairwise distinct posteriors, some of them with
    zeros.
    """
    names = labels(states)
    chosen: dict[FiniteDistribution, None] = {}
    while len(chosen) < posteriors:
        chosen[FiniteDistribution(names, random_vector(rng, states, False))] = None
    weights = random_vector(rng, posteriors, True)
    return FiniteEnsemble(
        tuple(EnsembleEntry(p, w) for p, w in zip(chosen, weights, strict=True))
    )


def random_instance(
    rng: np.random.Generator, states: int, posteriors: int
) -> tuple[FiniteDistribution, FiniteEnsemble]:
    """
    Random prior and ensemble. A third of the draws are Bayes-plausible, a
    third have a full-support prior and the rest have a prior with zeros.
    """
    ensemble = random_ensemble(rng, states, posteriors)
    kind = int(rng.integers(0, 3))
    if kind == 0:
        average = average_posterior(ensemble)
        assert isinstance(average, FiniteDistribution)
        return average, ensemble
    prior = FiniteDistribution(labels(states), random_vector(rng, states, kind == 1))
    return prior, ensemble


@st.composite
def exact_distributions(
    draw: st.DrawFn, n: int, full_support: bool = False
) -> FiniteDistribution:
    """
    Hypothesis strategy for exact distributions over x1..xn.
    """
    low = 1 if full_support else 0
    counts = draw(
        st.lists(st.integers(low, 20), min_size=n, max_size=n).filter(
            lambda c: sum(c) > 0
        )
    )
    total = sum(counts)
    return FiniteDistribution(labels(n), tuple(Fraction(c, total) for c in counts))


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(0x5EED)


@pytest.fixture()
def two_state_instance() -> ProblemInstance:
    return load_instance(TWO_STATE)


@pytest.fixture()
def two_state_prior() -> FiniteDistribution:
    return FiniteDistribution(("H", "L"), (Fraction(1, 2), Fraction(1, 2)))


@pytest.fixture()
def two_state_ensemble() -> FiniteEnsemble:
    return FiniteEnsemble(
        (
            EnsembleEntry(
                FiniteDistribution(("H", "L"), (Fraction(4, 5), Fraction(1, 5))),
                Fraction(1, 4),
                "0.8",
            ),
            EnsembleEntry(
                FiniteDistribution(("H", "L"), (Fraction(1), Fraction(0))),
                Fraction(3, 4),
                "1.0",
            ),
        )
    )
