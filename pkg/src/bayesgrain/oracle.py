"""
Brute-force and Monte Carlo checks, independent of the constructive path.

``exhaustive_model_search`` looks for any subjective model on a probability
grid that rationalizes a small finite instance. ``monte_carlo_posterior_law``
draws true signals, updates through a model and tallies the posteriors.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from bayesgrain.error import InvalidParameterError, SearchSpaceTooLarge
from bayesgrain.measures import EnsembleEntry, FiniteDistribution, FiniteEnsemble, Prob
from bayesgrain.rationalizer import (
    OMINUS,
    SubjectiveModel,
    TrueSignalModel,
    require_finite_posteriors,
    verify_model,
)

LOGGER = logging.getLogger(__name__)

DEFAULT_SEED = 0x5EED
DEFAULT_GRID = 16
MIN_GRID = 4
MAX_GRID = 20
MAX_STATES = 3
MAX_POSTERIORS = 3
MIN_DRAWS = 10_000
DEFAULT_DRAWS = 100_000
CHUNK_SIZE = 1 << 16


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """
    All tuples of ``parts`` nonnegative integers summing to ``total``.
    """
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        edges = (-1, *bars, total + parts - 1)
        yield tuple(edges[i + 1] - edges[i] - 1 for i in range(parts))


@dataclass(frozen=True)
class GridModelSpace:
    """
    Joint tables over states × signals whose entries are multiples of 1/g.
    """

    states: tuple[str, ...]
    signals: tuple[str, ...]
    g: int

    def __post_init__(self) -> None:
        if self.g < MIN_GRID:
            raise InvalidParameterError(f"grid resolution must be at least {MIN_GRID}")
        if OMINUS not in self.signals:
            raise InvalidParameterError(f"grid model space needs the {OMINUS} signal")

    def size(self) -> int:
        """
        Number of joint tables on the grid.
        """
        cells = len(self.states) * len(self.signals)
        return math.comb(self.g + cells - 1, cells - 1)

    def model(self, columns: Sequence[Sequence[int]]) -> SubjectiveModel:
        """
        The table whose column j holds ``columns[j]`` grid units per state.
        """
        if len(columns) != len(self.signals):
            raise InvalidParameterError("one column per signal is required")
        joint = tuple(
            tuple(Fraction(column[i], self.g) for column in columns)
            for i in range(len(self.states))
        )
        return SubjectiveModel(self.states, self.signals, joint)


def _column_candidates(
    mass: int,
    posterior: FiniteDistribution,
    prior: FiniteDistribution,
    g: int,
    tol: Fraction,
) -> list[tuple[int, ...]]:
    candidates = []
    for column in compositions(mass, len(prior.states)):
        if all(
            (c > 0) == (mu > 0)
            and not (c > 0 and p_x <= 0)
            and abs(Fraction(c, mass) - mu) <= tol
            for c, mu, p_x in zip(column, posterior.probs, prior.probs, strict=True)
        ):
            candidates.append(column)
    return candidates


def _signal_marginal_allowed(
    units: Sequence[int],
    true_signals: TrueSignalModel,
    g: int,
    require_zero_ominus: bool,
    fix_signal_marginal: bool,
) -> bool:
    *true_units, ominus_units = units
    if require_zero_ominus and ominus_units:
        return False
    for u, p in zip(true_units, true_signals.probs, strict=True):
        if p > 0 and u == 0:
            return False
        if fix_signal_marginal and abs(u - p * g) >= 1:
            return False
    return True


def exhaustive_model_search(
    prior: FiniteDistribution,
    ensemble: FiniteEnsemble,
    true_signals: TrueSignalModel | None = None,
    g: int = DEFAULT_GRID,
    require_zero_ominus: bool = False,
    fix_signal_marginal: bool = False,
) -> SubjectiveModel | None:
    """
    Search the grid of joint tables for a model that passes verification with
    tolerance 2/g and exact zero patterns.

    The search enumerates signal marginals first, then for each true signal
    the grid columns whose conditional is within 2/g of the signal's labeled
    posterior, then the ``⊖`` column that completes the state marginal.

    Args:
        prior: Observed prior, at most three states.
        ensemble: Observed finite ensemble, at most three posteriors.
        true_signals: True signal law; defaults to the identity labeling.
        g: Grid resolution, probabilities are multiples of 1/g.
        require_zero_ominus: Only consider models without ``⊖`` mass.
        fix_signal_marginal: Only consider models whose signal marginal
            matches the true signal law up to grid rounding.

    Returns:
        The first passing model in search order, or None.

    Raises:
        SearchSpaceTooLarge: beyond three states, three posteriors or g = 20.
    """
    posteriors = require_finite_posteriors(prior, ensemble)
    if true_signals is None:
        true_signals = TrueSignalModel.from_ensemble(ensemble)
    if (
        len(prior.states) > MAX_STATES
        or len(posteriors) > MAX_POSTERIORS
        or len(true_signals.signals) > MAX_POSTERIORS
        or g > MAX_GRID
    ):
        raise SearchSpaceTooLarge(
            f"exhaustive search is limited to {MAX_STATES} states, {MAX_POSTERIORS} "
            f"posteriors and g <= {MAX_GRID}"
        )
    space = GridModelSpace(prior.states, true_signals.signals + (OMINUS,), g)
    tol = Fraction(2, g)
    LOGGER.debug("Searching %s grid tables (before pruning)", space.size())

    bounds = [_row_bounds(p_x, g, tol) for p_x in prior.probs]
    column_cache: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    checked = 0
    for units in compositions(g, len(space.signals)):
        if not _signal_marginal_allowed(
            units, true_signals, g, require_zero_ominus, fix_signal_marginal
        ):
            continue
        *true_units, ominus_units = units
        per_signal = []
        for j, u in enumerate(true_units):
            key = (j, u)
            if key not in column_cache:
                column_cache[key] = (
                    _column_candidates(u, true_signals.posteriors[j], prior, g, tol)
                    if u
                    else [(0,) * len(prior.states)]
                )
            per_signal.append(column_cache[key])
        for columns, ominus in _complete_tables(per_signal, ominus_units, bounds):
            checked += 1
            model = space.model((*columns, ominus))
            if verify_model(
                model, prior, ensemble, true_signals, tol=tol, strict_support=True
            ):
                LOGGER.debug("Found a model after %s candidate tables", checked)
                return model
    LOGGER.debug("No model among %s candidate tables", checked)
    return None


def _row_bounds(p_x: Prob, g: int, tol: Fraction) -> tuple[int, int]:
    """Admissible grid units of a state marginal entry."""
    if p_x <= 0:
        return 0, 0
    target = Fraction(p_x) * g
    return max(1, math.ceil(target - tol * g)), math.floor(target + tol * g)


def _complete_tables(
    per_signal: Sequence[list[tuple[int, ...]]],
    ominus_units: int,
    bounds: Sequence[tuple[int, int]],
) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]:
    """
    Depth-first choice of one column per true signal, pruned on the state
    marginal bounds, completed by every admissible ``⊖`` column.
    """
    states = len(bounds)

    def extend(
        j: int, chosen: tuple[tuple[int, ...], ...], partial: tuple[int, ...]
    ) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]:
        if j == len(per_signal):
            windows = [
                range(max(0, lo - part), hi - part + 1)
                for part, (lo, hi) in zip(partial, bounds, strict=True)
            ]
            for head in itertools.product(*windows[:-1]):
                last = ominus_units - sum(head)
                if last in windows[-1]:
                    yield chosen, (*head, last)
            return
        for column in per_signal[j]:
            grown = tuple(a + b for a, b in zip(partial, column, strict=True))
            if all(v <= hi for v, (_, hi) in zip(grown, bounds, strict=True)):
                yield from extend(j + 1, chosen + (column,), grown)

    yield from extend(0, (), (0,) * states)


@dataclass(frozen=True)
class PosteriorFrequencies:
    """
    Tally of posteriors reached by updating on sampled signals.
    """

    posteriors: tuple[FiniteDistribution, ...]
    counts: tuple[int, ...]
    draws: int

    def frequencies(self) -> tuple[float, ...]:
        return tuple(c / self.draws for c in self.counts)

    def frequency_of(self, posterior: FiniteDistribution) -> float:
        """
        Empirical frequency of a posterior, zero when never reached.
        """
        for candidate, count in zip(self.posteriors, self.counts, strict=True):
            if candidate.isclose(posterior):
                return count / self.draws
        return 0.0

    def binomial_sigma(self, p: float) -> float:
        """
        Standard deviation of a frequency with success probability p.
        """
        return math.sqrt(p * (1 - p) / self.draws)


def monte_carlo_posterior_law(
    model: SubjectiveModel,
    true_signals: TrueSignalModel,
    draws: int = DEFAULT_DRAWS,
    seed: int = DEFAULT_SEED,
) -> PosteriorFrequencies:
    """
    Draw signals from the true law, update each through the model's kernel
    and count the posteriors reached.

    Sampling runs in fixed chunks, each with its own generator spawned from
    the seed, so results depend only on the seed and the number of draws.
    """
    if draws < MIN_DRAWS:
        raise InvalidParameterError(f"at least {MIN_DRAWS} draws are required")
    posteriors: list[FiniteDistribution] = []
    mapping = []
    for signal, p in zip(true_signals.signals, true_signals.probs, strict=True):
        updated = model.kernel(signal)
        if updated is None:
            if p > 0:
                raise InvalidParameterError(f"signal {signal} has no subjective mass")
            mapping.append(0)
            continue
        if updated not in posteriors:
            posteriors.append(updated)
        mapping.append(posteriors.index(updated))
    index = np.array(mapping, dtype=np.intp)
    probs = np.array([float(p) for p in true_signals.probs], dtype=np.float64)
    probs /= probs.sum()

    counts = np.zeros(len(posteriors), dtype=np.int64)
    chunks = math.ceil(draws / CHUNK_SIZE)
    for chunk, child in enumerate(np.random.SeedSequence(seed).spawn(chunks)):
        size = min(CHUNK_SIZE, draws - chunk * CHUNK_SIZE)
        rng = np.random.default_rng(child)
        sample = rng.choice(len(probs), size=size, p=probs)
        counts += np.bincount(index[sample], minlength=len(posteriors))
    LOGGER.debug("Sampled %s signals into %s posteriors", draws, len(posteriors))
    return PosteriorFrequencies(tuple(posteriors), tuple(int(c) for c in counts), draws)


def random_grid_instance(
    rng: np.random.Generator, states: int, signals: int, g: int
) -> tuple[FiniteDistribution, FiniteEnsemble, SubjectiveModel] | None:
    """
    Draw a random grid joint table and read off the instance it rationalizes:
    the state marginal as prior, each true signal's kernel as a posterior and
    the true signal law proportional to the signal marginal.

    Returns:
        (prior, ensemble, model), or None when the draw leaves a true signal
        without mass or repeats a posterior.
    """
    labels = tuple(f"x{i + 1}" for i in range(states))
    width = signals + 1
    flat = rng.multinomial(g, np.full(states * width, 1 / (states * width)))
    joint = tuple(
        tuple(Fraction(int(v), g) for v in flat[i * width : (i + 1) * width])
        for i in range(states)
    )
    model = SubjectiveModel(
        labels, tuple(f"s{j + 1}" for j in range(signals)) + (OMINUS,), joint
    )
    prior = model.x_marginal()
    marginal = model.s_marginal()
    true_mass = sum(marginal.probs[:-1], Fraction(0))
    if true_mass == 0 or any(m == 0 for m in marginal.probs[:-1]):
        return None
    kernels = [model.kernel(s) for s in model.signals[:-1]]
    if any(k is None for k in kernels) or len(set(kernels)) != len(kernels):
        return None
    ensemble = FiniteEnsemble(
        tuple(
            EnsembleEntry(k, m / true_mass)
            for k, m in zip(kernels, marginal.probs[:-1], strict=True)
            if k is not None
        )
    )
    return prior, ensemble, model


def zero_out_state(prior: FiniteDistribution, state: str) -> FiniteDistribution | None:
    """
    The prior with ``state`` removed and the rest renormalized, or None when
    nothing would remain.
    """
    index = prior.states.index(state)
    rest: Prob = sum((p for i, p in enumerate(prior.probs) if i != index), Fraction(0))
    if rest <= 0:
        return None
    return FiniteDistribution(
        prior.states,
        tuple(
            Fraction(0) if i == index else p / rest for i, p in enumerate(prior.probs)
        ),
    )
