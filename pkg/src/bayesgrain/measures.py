"""
Distribution primitives: finite and parametric one-dimensional laws,
posterior ensembles, average posteriors, density ratios and tail
probabilities.

Finite distributions work in two arithmetic modes. When every probability is a
``Fraction`` the distribution is exact and all identities are checked exactly;
otherwise probabilities are floats and sums are checked to ``FLOAT_TOLERANCE``.
Parametric laws are one-dimensional and evaluated in the log domain so that
far-tail cells neither underflow nor overflow.
"""

from __future__ import annotations

import enum
import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, TypeAlias

import numpy as np
import numpy.typing as npt
from scipy import optimize, stats
from scipy.special import logsumexp

from bayesgrain.error import (
    InvalidParameterError,
    MixedRepresentation,
    UnsupportedPair,
    ValidationError,
    ZeroMassCell,
)

LOGGER = logging.getLogger(__name__)

Prob: TypeAlias = Fraction | float
FloatArray: TypeAlias = npt.NDArray[np.float64]

FLOAT_TOLERANCE = 1e-9
# Probability mass left outside coverage intervals (split between both tails).
TAIL_MASS = 1e-12
GRID_POINTS = 10_000
MAX_LOG_FLOAT = math.log(np.finfo(np.float64).max)


def to_prob(value: Any, exact: bool) -> Prob:
    """
    Convert a user supplied number into a probability of the requested mode.

    Strings of the form ``"num/den"`` and decimal literals are accepted. Floats
    become the rational with the same shortest decimal representation, so
    ``0.8`` is read as ``4/5`` in exact mode.

    Args:
        value: An int, float, Fraction or string.
        exact: Return a Fraction when True, else a float.

    Returns:
        The converted probability.
    """
    if isinstance(value, bool):
        raise TypeError("Booleans are not probabilities")
    if isinstance(value, Fraction):
        return value if exact else float(value)
    if isinstance(value, int):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        return Fraction(repr(value)) if exact else value
    if isinstance(value, str):
        number = Fraction(value.strip())
        return number if exact else float(number)
    raise TypeError(f"Unsupported number type: {type(value).__name__}")


def is_close(a: Prob, b: Prob, tol: Prob | None = None) -> bool:
    """
    Compare two probabilities. Exact pairs compare exactly unless a tolerance
    is given; anything else compares within ``FLOAT_TOLERANCE``.
    """
    if tol is None:
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a == b
        tol = FLOAT_TOLERANCE
    return abs(a - b) <= tol


@dataclass(frozen=True)
class FiniteDistribution:
    """
    Probability vector over an ordered list of labeled states.

    Attributes:
        states: State labels, pairwise distinct.
        probs: One probability per state. All Fractions (exact mode) or all
            floats.
    """

    states: tuple[str, ...]
    probs: tuple[Prob, ...]

    def __post_init__(self) -> None:
        states = tuple(self.states)
        if len(set(states)) != len(states):
            raise ValidationError("states", "state labels must be distinct")
        if len(states) != len(self.probs):
            raise ValidationError(
                "probs", f"expected {len(states)} probabilities, got {len(self.probs)}"
            )
        exact = all(isinstance(p, (Fraction, int)) for p in self.probs)
        probs = tuple(to_prob(p, exact) for p in self.probs)
        if any(p < 0 for p in probs):
            raise ValidationError("probs", "probabilities must be nonnegative")
        if not is_close(sum(probs, Fraction(0) if exact else 0.0), 1 if exact else 1.0):
            raise ValidationError("probs", f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_values(
        cls, states: Sequence[str], values: Sequence[Any], exact: bool = True
    ) -> FiniteDistribution:
        """
        Build a distribution converting each value with ``to_prob``.
        """
        return cls(tuple(states), tuple(to_prob(v, exact) for v in values))

    @property
    def exact(self) -> bool:
        """
        True when the distribution uses exact rational arithmetic.
        """
        return all(isinstance(p, Fraction) for p in self.probs)

    def prob(self, state: str) -> Prob:
        """
        Probability of a single state.
        """
        return self.probs[self.states.index(state)]

    def support(self) -> frozenset[str]:
        """
        States carrying positive probability.
        """
        return frozenset(
            s for s, p in zip(self.states, self.probs, strict=True) if p > 0
        )

    def isclose(self, other: FiniteDistribution, tol: Prob | None = None) -> bool:
        """
        State-by-state comparison, exact in rational mode.
        """
        return self.states == other.states and all(
            is_close(a, b, tol) for a, b in zip(self.probs, other.probs, strict=True)
        )

    def as_floats(self) -> FloatArray:
        """
        Probabilities as a float array.
        """
        return np.array([float(p) for p in self.probs], dtype=np.float64)

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.probs) + ")"


def _log1mexp(d: float) -> float:
    """log(1 - exp(d)) for d <= 0."""
    if d >= 0:
        return -math.inf
    if d > -math.log(2):
        return math.log(-math.expm1(d))
    return math.log1p(-math.exp(d))


class TailKind(enum.IntEnum):
    """
    Asymptotic decay families of a log-tail, ordered from lightest to heaviest.
    """

    COMPACT = 0
    GAUSSIAN_SQUARED = 1
    EXPONENTIAL = 2
    POLYNOMIAL = 3


@dataclass(frozen=True)
class TailClass:
    """
    Ordering key for the asymptotic decay of one side of a tail.

    Attributes:
        kind: Decay family.
        rate: Coefficient of r² (Gaussian), exponential rate, or polynomial
            exponent. Larger is lighter.
        drift: Linear coefficient of a Gaussian log-tail; larger is heavier.
    """

    kind: TailKind
    rate: float = 0.0
    drift: float = 0.0

    def heaviness(self) -> tuple[float, float, float]:
        """
        Key that sorts lighter tails first.
        """
        if self.kind is TailKind.COMPACT:
            return (0.0, 0.0, 0.0)
        if self.kind is TailKind.GAUSSIAN_SQUARED:
            return (1.0, -self.rate, self.drift)
        return (float(self.kind), -self.rate, 0.0)

    def compare(self, other: TailClass) -> int:
        """
        Return 1 if self is heavier than other, -1 if lighter, 0 if tied.
        """
        for mine, theirs in zip(self.heaviness(), other.heaviness(), strict=True):
            if math.isclose(mine, theirs, rel_tol=1e-12, abs_tol=1e-15):
                continue
            return 1 if mine > theirs else -1
        return 0


COMPACT_TAIL = TailClass(TailKind.COMPACT)


def heaviest(classes: Iterable[TailClass]) -> TailClass:
    """
    The heaviest of several tail classes.
    """
    result = COMPACT_TAIL
    for tail in classes:
        if tail.compare(result) > 0:
            result = tail
    return result


@dataclass(frozen=True)
class LogDensityPiece:
    """
    On [lower, upper) the log-density equals
    quadratic·x² + linear·x + constant.
    """

    lower: float
    upper: float
    quadratic: float
    linear: float
    constant: float

    def clip(self, lower: float, upper: float) -> LogDensityPiece | None:
        lo, hi = max(self.lower, lower), min(self.upper, upper)
        if lo >= hi:
            return None
        return LogDensityPiece(lo, hi, self.quadratic, self.linear, self.constant)


class ParametricDistribution(ABC):
    """
    A one-dimensional law given by a tagged parametric family.
    """

    atomic: bool = False

    @abstractmethod
    def support(self) -> tuple[float, float]:
        """
        Closed hull (lower, upper) of the support.
        """

    @abstractmethod
    def logpdf(self, x: npt.ArrayLike) -> FloatArray:
        """
        Log-density with respect to Lebesgue measure.
        """

    @abstractmethod
    def logcdf(self, x: float) -> float:
        """
        log P(X <= x).
        """

    @abstractmethod
    def logsf(self, x: float) -> float:
        """
        log P(X > x).
        """

    @abstractmethod
    def quantile(self, u: float) -> float:
        """
        Inverse distribution function.
        """

    @abstractmethod
    def tail_classes(self) -> tuple[TailClass, TailClass]:
        """
        Tail classes of the (left, right) tails.
        """

    def pdf(self, x: npt.ArrayLike) -> FloatArray:
        return np.exp(self.logpdf(x))

    def cdf(self, x: float) -> float:
        return math.exp(self.logcdf(x))

    def sf(self, x: float) -> float:
        return math.exp(self.logsf(x))

    def log_mass(self, lower: float, upper: float) -> float:
        """
        log P(lower <= X < upper), computed on the side of the median that
        keeps precision in the far tails.
        """
        if upper <= lower:
            return -math.inf
        if lower >= self.quantile(0.5):
            la, lb = self.logsf(lower), self.logsf(upper)
            if la == -math.inf:
                return -math.inf
            return la + _log1mexp(lb - la)
        la, lb = self.logcdf(lower), self.logcdf(upper)
        if lb == -math.inf:
            return -math.inf
        return lb + _log1mexp(la - lb)

    def mass(self, lower: float, upper: float) -> float:
        """
        P(lower <= X < upper).
        """
        return math.exp(self.log_mass(lower, upper))

    def log_abs_tail(self, r: float) -> float:
        """
        log P(|X| > r).
        """
        return float(np.logaddexp(self.log_mass(-math.inf, -r), self.logsf(r)))

    def tail_class(self) -> TailClass:
        """
        Tail class of |X|: the heavier of both sides.
        """
        return heaviest(self.tail_classes())

    def coverage_interval(self, tail_mass: float = TAIL_MASS) -> tuple[float, float]:
        """
        Interval holding all but ``tail_mass`` of the probability.
        """
        return self.quantile(tail_mass / 2), self.quantile(1 - tail_mass / 2)


class _ScipyBacked(ParametricDistribution):
    """
    Families whose evaluators come from a frozen scipy.stats law.
    """

    @property
    @abstractmethod
    def law(self) -> Any:
        """
        The frozen scipy.stats distribution.
        """

    def logpdf(self, x: npt.ArrayLike) -> FloatArray:
        return np.asarray(self.law.logpdf(x), dtype=np.float64)

    def logcdf(self, x: float) -> float:
        return float(self.law.logcdf(x))

    def logsf(self, x: float) -> float:
        return float(self.law.logsf(x))

    def quantile(self, u: float) -> float:
        return float(self.law.ppf(u))


def _require_positive(name: str, value: float) -> None:
    if not value > 0 or not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite and strictly positive")


@dataclass(frozen=True)
class Normal(_ScipyBacked):
    mean: float
    variance: float

    def __post_init__(self) -> None:
        _require_positive("variance", self.variance)

    @cached_property
    def law(self) -> Any:
        return stats.norm(loc=self.mean, scale=math.sqrt(self.variance))

    def support(self) -> tuple[float, float]:
        return -math.inf, math.inf

    def tail_classes(self) -> tuple[TailClass, TailClass]:
        rate = 1 / (2 * self.variance)
        drift = self.mean / self.variance
        return (
            TailClass(TailKind.GAUSSIAN_SQUARED, rate, -drift),
            TailClass(TailKind.GAUSSIAN_SQUARED, rate, drift),
        )


@dataclass(frozen=True)
class Laplace(_ScipyBacked):
    location: float
    scale: float

    def __post_init__(self) -> None:
        _require_positive("scale", self.scale)

    @cached_property
    def law(self) -> Any:
        return stats.laplace(loc=self.location, scale=self.scale)

    def support(self) -> tuple[float, float]:
        return -math.inf, math.inf

    def tail_classes(self) -> tuple[TailClass, TailClass]:
        tail = TailClass(TailKind.EXPONENTIAL, 1 / self.scale)
        return tail, tail


class Orientation(str, enum.Enum):
    RIGHT = "right"
    MIRRORED = "mirrored"


@dataclass(frozen=True)
class Exponential(ParametricDistribution):
    """
    Exponential law anchored at zero, on [0, ∞) or mirrored onto (−∞, 0].
    """

    rate: float
    orientation: Orientation = Orientation.RIGHT

    def __post_init__(self) -> None:
        _require_positive("rate", self.rate)
        object.__setattr__(self, "orientation", Orientation(self.orientation))

    @cached_property
    def law(self) -> Any:
        return stats.expon(scale=1 / self.rate)

    @property
    def mirrored(self) -> bool:
        return self.orientation is Orientation.MIRRORED

    def support(self) -> tuple[float, float]:
        return (-math.inf, 0.0) if self.mirrored else (0.0, math.inf)

    def logpdf(self, x: npt.ArrayLike) -> FloatArray:
        values = np.asarray(x, dtype=np.float64)
        return np.asarray(
            self.law.logpdf(-values if self.mirrored else values), dtype=np.float64
        )

    def logcdf(self, x: float) -> float:
        return float(self.law.logsf(-x) if self.mirrored else self.law.logcdf(x))

    def logsf(self, x: float) -> float:
        return float(self.law.logcdf(-x) if self.mirrored else self.law.logsf(x))

    def quantile(self, u: float) -> float:
        if self.mirrored:
            return -float(self.law.ppf(1 - u))
        return float(self.law.ppf(u))

    def tail_classes(self) -> tuple[TailClass, TailClass]:
        tail = TailClass(TailKind.EXPONENTIAL, self.rate)
        return (tail, COMPACT_TAIL) if self.mirrored else (COMPACT_TAIL, tail)


@dataclass(frozen=True)
class Uniform(_ScipyBacked):
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise InvalidParameterError("uniform bounds must be finite with a < b")

    @cached_property
    def law(self) -> Any:
        return stats.uniform(loc=self.a, scale=self.b - self.a)

    def support(self) -> tuple[float, float]:
        return self.a, self.b

    def tail_classes(self) -> tuple[TailClass, TailClass]:
        return COMPACT_TAIL, COMPACT_TAIL


@dataclass(frozen=True)
class PointMass(ParametricDistribution):
    location: float

    atomic = True

    def support(self) -> tuple[float, float]:
        return self.location, self.location

    def logpdf(self, x: npt.ArrayLike) -> FloatArray:
        values = np.asarray(x, dtype=np.float64)
        return np.where(values == self.location, math.inf, -math.inf)

    def logcdf(self, x: float) -> float:
        return 0.0 if x >= self.location else -math.inf

    def logsf(self, x: float) -> float:
        return -math.inf if x >= self.location else 0.0

    def quantile(self, u: float) -> float:
        return self.location

    def log_mass(self, lower: float, upper: float) -> float:
        return 0.0 if lower <= self.location < upper else -math.inf

    def log_abs_tail(self, r: float) -> float:
        return 0.0 if abs(self.location) > r else -math.inf

    def tail_classes(self) -> tuple[TailClass, TailClass]:
        return COMPACT_TAIL, COMPACT_TAIL


@dataclass(frozen=True)
class Truncated(ParametricDistribution):
    """
    ``inner`` conditioned on the interval [lower, upper).
    """

    inner: ParametricDistribution
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise InvalidParameterError(
                "truncation interval must satisfy lower < upper"
            )
        if self.log_norm == -math.inf:
            raise ZeroMassCell(
                f"{self.inner!r} assigns no mass to [{self.lower}, {self.upper})"
            )

    @property
    def atomic(self) -> bool:  # type: ignore[override]
        return self.inner.atomic

    @cached_property
    def log_norm(self) -> float:
        return self.inner.log_mass(self.lower, self.upper)

    def support(self) -> tuple[float, float]:
        lo, hi = self.inner.support()
        return max(lo, self.lower), min(hi, self.upper)

    def logpdf(self, x: npt.ArrayLike) -> FloatArray:
        values = np.asarray(x, dtype=np.float64)
        inside = (values >= self.lower) & (values < self.upper)
        with np.errstate(invalid="ignore"):
            inner = self.inner.logpdf(values) - self.log_norm
        return np.where(inside, inner, -math.inf)

    def logcdf(self, x: float) -> float:
        if x < self.lower:
            return -math.inf
        if x >= self.upper:
            return 0.0
        return min(0.0, self.inner.log_mass(self.lower, x) - self.log_norm)

    def logsf(self, x: float) -> float:
        if x < self.lower:
            return 0.0
        if x >= self.upper:
            return -math.inf
        return min(0.0, self.inner.log_mass(x, self.upper) - self.log_norm)

    def log_mass(self, lower: float, upper: float) -> float:
        lo, hi = max(lower, self.lower), min(upper, self.upper)
        if lo >= hi:
            return -math.inf
        return min(0.0, self.inner.log_mass(lo, hi) - self.log_norm)

    def quantile(self, u: float) -> float:
        lo, hi = self.support()
        if u <= 0:
            return lo
        if u >= 1:
            return hi
        base = self.inner.cdf(self.lower) if math.isfinite(self.lower) else 0.0
        target = base + u * math.exp(self.log_norm)
        return min(max(self.inner.quantile(target), lo), hi)

    def tail_classes(self) -> tuple[TailClass, TailClass]:
        left, right = self.inner.tail_classes()
        return (
            COMPACT_TAIL if math.isfinite(self.lower) else left,
            COMPACT_TAIL if math.isfinite(self.upper) else right,
        )


@dataclass(frozen=True)
class Mixture(ParametricDistribution):
    """
    Finite mixture of parametric laws with positive weights summing to one.
    """

    components: tuple[tuple[float, ParametricDistribution], ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise InvalidParameterError("a mixture needs at least one component")
        weights = [w for w, _ in self.components]
        if any(w <= 0 for w in weights) or not math.isclose(
            sum(weights), 1.0, abs_tol=FLOAT_TOLERANCE
        ):
            raise InvalidParameterError("mixture weights must be positive and sum to 1")

    @property
    def atomic(self) -> bool:  # type: ignore[override]
        return any(c.atomic for _, c in self.components)

    def _log_weights(self) -> FloatArray:
        return np.log(np.array([w for w, _ in self.components], dtype=np.float64))

    def support(self) -> tuple[float, float]:
        bounds = [c.support() for _, c in self.components]
        return min(lo for lo, _ in bounds), max(hi for _, hi in bounds)

    def logpdf(self, x: npt.ArrayLike) -> FloatArray:
        values = np.asarray(x, dtype=np.float64)
        stacked = np.stack([c.logpdf(values) for _, c in self.components])
        log_w = self._log_weights().reshape((-1,) + (1,) * values.ndim)
        return np.asarray(logsumexp(stacked + log_w, axis=0), dtype=np.float64)

    def _combine(self, parts: Iterable[float]) -> float:
        return float(
            logsumexp(np.fromiter(parts, dtype=np.float64) + self._log_weights())
        )

    def logcdf(self, x: float) -> float:
        return self._combine(c.logcdf(x) for _, c in self.components)

    def logsf(self, x: float) -> float:
        return self._combine(c.logsf(x) for _, c in self.components)

    def log_mass(self, lower: float, upper: float) -> float:
        return self._combine(c.log_mass(lower, upper) for _, c in self.components)

    def log_abs_tail(self, r: float) -> float:
        return self._combine(c.log_abs_tail(r) for _, c in self.components)

    def quantile(self, u: float) -> float:
        lows, highs = zip(
            *(c.coverage_interval(min(u, 1 - u) / 2) for _, c in self.components),
            strict=True,
        )
        lo, hi = min(lows), max(highs)
        if lo == hi:
            return lo
        return float(optimize.brentq(lambda x: self.cdf(x) - u, lo, hi, xtol=1e-12))

    def tail_classes(self) -> tuple[TailClass, TailClass]:
        sides = [c.tail_classes() for _, c in self.components]
        return heaviest(s[0] for s in sides), heaviest(s[1] for s in sides)


def mixture(
    components: Sequence[tuple[float, ParametricDistribution]],
) -> ParametricDistribution:
    """
    Build a mixture, merging repeated components and simplifying known
    closed forms: a single component is returned as is, and an equal-weight
    pair of an exponential law and its mirror image is a Laplace law.
    """
    merged: dict[ParametricDistribution, float] = {}
    for weight, component in components:
        merged[component] = merged.get(component, 0.0) + float(weight)
    if len(merged) == 1:
        return next(iter(merged))
    if len(merged) == 2:
        (first, w1), (second, w2) = merged.items()
        if (
            isinstance(first, Exponential)
            and isinstance(second, Exponential)
            and first.rate == second.rate
            and first.orientation is not second.orientation
            and math.isclose(w1, w2, abs_tol=FLOAT_TOLERANCE)
        ):
            return Laplace(0.0, 1 / first.rate)
    return Mixture(tuple((w, c) for c, w in merged.items()))


Posterior: TypeAlias = FiniteDistribution | ParametricDistribution


@dataclass(frozen=True)
class EnsembleEntry:
    """
    One realized posterior of a finite ensemble and its probability.
    """

    posterior: Posterior
    weight: Prob
    label: str | None = None


@dataclass(frozen=True)
class FiniteEnsemble:
    """
    Distribution over finitely many posteriors.
    """

    entries: tuple[EnsembleEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        if not entries:
            raise ValidationError(
                "ensemble.entries", "at least one posterior is required"
            )
        weights = [e.weight for e in entries]
        if any(w <= 0 for w in weights):
            raise ValidationError(
                "ensemble.weights", "weights must be strictly positive"
            )
        exact = all(isinstance(w, Fraction) for w in weights)
        total = sum(weights, Fraction(0) if exact else 0.0)
        if not is_close(total, 1 if exact else 1.0):
            raise ValidationError("ensemble.weights", f"weights sum to {total}, not 1")
        posteriors = [e.posterior for e in entries]
        if len(set(posteriors)) != len(posteriors):
            raise ValidationError(
                "ensemble.entries", "posteriors must be pairwise distinct"
            )
        labels = [e.label for e in entries if e.label is not None]
        if len(set(labels)) != len(labels):
            raise ValidationError("ensemble.entries", "labels must be distinct")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *pairs: tuple[Posterior, Prob]) -> FiniteEnsemble:
        """
        Convenience constructor from (posterior, weight) pairs.
        """
        return cls(tuple(EnsembleEntry(p, w) for p, w in pairs))

    @property
    def posteriors(self) -> tuple[Posterior, ...]:
        return tuple(e.posterior for e in self.entries)

    @property
    def weights(self) -> tuple[Prob, ...]:
        return tuple(e.weight for e in self.entries)

    def labels(self) -> tuple[str, ...]:
        """
        Entry labels, defaulting to s1, s2, ... for unlabeled entries.
        """
        return tuple(
            e.label if e.label is not None else f"s{i + 1}"
            for i, e in enumerate(self.entries)
        )

    def finite_posteriors(self) -> tuple[FiniteDistribution, ...]:
        """
        The posteriors, required to be finite distributions.
        """
        posteriors = self.posteriors
        if not all(isinstance(p, FiniteDistribution) for p in posteriors):
            raise MixedRepresentation("the ensemble holds non-finite posteriors")
        return tuple(p for p in posteriors if isinstance(p, FiniteDistribution))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class PointMassFamily:
    """
    Posteriors that are point masses δ_Z with Z drawn from ``location_law``.
    """

    location_law: ParametricDistribution


PosteriorEnsemble: TypeAlias = FiniteEnsemble | PointMassFamily


def weighted_sum(
    dists: Sequence[FiniteDistribution], weights: Sequence[Prob]
) -> tuple[Prob, ...]:
    """
    State-by-state weighted sum of finite distributions over one state list.
    """
    exact = all(d.exact for d in dists) and all(
        isinstance(w, Fraction) for w in weights
    )
    zero: Prob = Fraction(0) if exact else 0.0
    totals = [zero] * len(dists[0].states)
    for dist, weight in zip(dists, weights, strict=True):
        for i, p in enumerate(dist.probs):
            totals[i] += weight * p if exact else float(weight) * float(p)
    return tuple(totals)


def average_posterior(
    ensemble: PosteriorEnsemble, cell: Iterable[int] | None = None
) -> Posterior:
    """
    Average posterior over a cell of entries, the weight-renormalized mixture
    of the posteriors in the cell. Without a cell, the average over the whole
    ensemble.

    Args:
        ensemble: A finite ensemble.
        cell: Indices of the entries forming the cell.

    Returns:
        A finite distribution when the posteriors are finite, otherwise a
        (simplified) mixture of parametric laws.
    """
    if not isinstance(ensemble, FiniteEnsemble):
        raise MixedRepresentation(
            "point-mass families are averaged per interval with cell_average_posterior"
        )
    indices = sorted(set(cell)) if cell is not None else list(range(len(ensemble)))
    entries = [ensemble.entries[i] for i in indices]
    weights = [e.weight for e in entries]
    total = sum(
        weights, Fraction(0) if all(isinstance(w, Fraction) for w in weights) else 0.0
    )
    if total <= 0:
        raise ZeroMassCell(f"cell {indices} carries no weight")
    posteriors = [e.posterior for e in entries]

    if all(isinstance(p, FiniteDistribution) for p in posteriors):
        finite = [p for p in posteriors if isinstance(p, FiniteDistribution)]
        states = finite[0].states
        for posterior in finite:
            if posterior.states != states:
                raise ValidationError(
                    "ensemble.entries", "posteriors use different states"
                )
        normalized = [w / total for w in weights]
        return FiniteDistribution(states, weighted_sum(finite, normalized))
    if all(isinstance(p, ParametricDistribution) for p in posteriors):
        return mixture(
            [
                (float(w) / float(total), p)
                for w, p in zip(weights, posteriors, strict=True)
                if isinstance(p, ParametricDistribution)
            ]
        )
    raise MixedRepresentation("the ensemble mixes finite and parametric posteriors")


def cell_average_posterior(
    family: PointMassFamily, lower: float, upper: float
) -> ParametricDistribution:
    """
    Average posterior of a point-mass family over the posteriors located in
    [lower, upper): the location law truncated to the interval.
    """
    law = family.location_law
    if law.log_mass(lower, upper) == -math.inf:
        raise ZeroMassCell(f"{law!r} assigns no mass to [{lower}, {upper})")
    if lower == -math.inf and upper == math.inf:
        return law
    return Truncated(law, lower, upper)


def tail_probability(p: ParametricDistribution, r: float) -> float:
    """
    P(|X| > r) from closed-form survival functions.
    """
    if r < 0:
        raise InvalidParameterError("the tail radius must be nonnegative")
    return min(1.0, math.exp(p.log_abs_tail(r)))


def log_tail_probability(p: ParametricDistribution, r: float) -> float:
    """
    log P(|X| > r).
    """
    if r < 0:
        raise InvalidParameterError("the tail radius must be nonnegative")
    return min(0.0, p.log_abs_tail(r))


def _normal_pieces(dist: Normal) -> list[LogDensityPiece]:
    v, m = dist.variance, dist.mean
    return [
        LogDensityPiece(
            -math.inf,
            math.inf,
            -1 / (2 * v),
            m / v,
            -(m * m) / (2 * v) - 0.5 * math.log(2 * math.pi * v),
        )
    ]


def _laplace_pieces(dist: Laplace) -> list[LogDensityPiece]:
    mu, b = dist.location, dist.scale
    norm = math.log(2 * b)
    return [
        LogDensityPiece(-math.inf, mu, 0.0, 1 / b, -mu / b - norm),
        LogDensityPiece(mu, math.inf, 0.0, -1 / b, mu / b - norm),
    ]


def _exponential_pieces(dist: Exponential) -> list[LogDensityPiece]:
    lam = dist.rate
    if dist.mirrored:
        return [LogDensityPiece(-math.inf, 0.0, 0.0, lam, math.log(lam))]
    return [LogDensityPiece(0.0, math.inf, 0.0, -lam, math.log(lam))]


def _uniform_pieces(dist: Uniform) -> list[LogDensityPiece]:
    return [LogDensityPiece(dist.a, dist.b, 0.0, 0.0, -math.log(dist.b - dist.a))]


def _truncated_pieces(dist: Truncated) -> list[LogDensityPiece] | None:
    inner = log_density_pieces(dist.inner)
    if inner is None:
        return None
    pieces = []
    for piece in inner:
        clipped = piece.clip(dist.lower, dist.upper)
        if clipped is not None:
            pieces.append(
                LogDensityPiece(
                    clipped.lower,
                    clipped.upper,
                    clipped.quadratic,
                    clipped.linear,
                    clipped.constant - dist.log_norm,
                )
            )
    return pieces


_LOG_DENSITY_PIECES: dict[type, Callable[[Any], list[LogDensityPiece] | None]] = {
    Normal: _normal_pieces,
    Laplace: _laplace_pieces,
    Exponential: _exponential_pieces,
    Uniform: _uniform_pieces,
    Truncated: _truncated_pieces,
}


def log_density_pieces(dist: ParametricDistribution) -> list[LogDensityPiece] | None:
    """
    Piecewise-quadratic form of the log-density, or None for laws outside the
    analytic dispatch table.
    """
    handler = _LOG_DENSITY_PIECES.get(type(dist))
    return handler(dist) if handler is not None else None


def _sup_quadratic(
    a2: float, a1: float, a0: float, lower: float, upper: float
) -> float:
    """Supremum of a2·x² + a1·x + a0 over the interval [lower, upper)."""
    candidates = []
    for end, direction in ((lower, -1.0), (upper, 1.0)):
        if math.isfinite(end):
            candidates.append(a2 * end * end + a1 * end + a0)
        elif a2 > 0 or (a2 == 0 and a1 * direction > 0):
            return math.inf
        elif a2 == 0 and a1 == 0:
            candidates.append(a0)
    if a2 < 0:
        vertex = -a1 / (2 * a2)
        if lower < vertex < upper:
            candidates.append(a0 - a1 * a1 / (4 * a2))
    return max(candidates) if candidates else -math.inf


def _analytic_log_ratio(
    q_pieces: list[LogDensityPiece], p_pieces: list[LogDensityPiece]
) -> float:
    best = -math.inf
    for qp in q_pieces:
        covered = 0.0
        for pp in p_pieces:
            overlap = qp.clip(pp.lower, pp.upper)
            if overlap is None:
                continue
            covered += overlap.upper - overlap.lower
            best = max(
                best,
                _sup_quadratic(
                    qp.quadratic - pp.quadratic,
                    qp.linear - pp.linear,
                    qp.constant - pp.constant,
                    overlap.lower,
                    overlap.upper,
                ),
            )
        if math.isfinite(covered) and covered < qp.upper - qp.lower:
            return math.inf
    return best


def _grid_log_ratio(q: ParametricDistribution, p: ParametricDistribution) -> float:
    lo, hi = p.coverage_interval()
    q_lo, q_hi = q.support()
    lo, hi = max(lo, q_lo), min(hi, q_hi)
    if not lo < hi:
        return -math.inf
    grid = np.linspace(lo, hi, GRID_POINTS)
    log_q, log_p = q.logpdf(grid), p.logpdf(grid)
    positive = log_q > -math.inf
    if np.any(log_p[positive] == -math.inf):
        return math.inf
    if not np.any(positive):
        return -math.inf
    return float(np.max(log_q[positive] - log_p[positive]))


def support_contained(q: ParametricDistribution, p: ParametricDistribution) -> bool:
    """
    True when the support hull of q lies inside the support hull of p.
    """
    q_lo, q_hi = q.support()
    p_lo, p_hi = p.support()
    return p_lo <= q_lo and q_hi <= p_hi


def tails_dominated(q: ParametricDistribution, p: ParametricDistribution) -> bool:
    """
    True when neither tail of q is heavier than the same tail of p.
    """
    return all(
        qt.compare(pt) <= 0
        for qt, pt in zip(q.tail_classes(), p.tail_classes(), strict=True)
    )


def log_density_ratio_sup(
    q: ParametricDistribution, p: ParametricDistribution
) -> float:
    """
    Logarithm of ``density_ratio_sup``, free of overflow for far-tail cells.
    """
    if q.atomic or p.atomic:
        raise UnsupportedPair(q, p)
    if not support_contained(q, p) or not tails_dominated(q, p):
        return math.inf
    q_pieces, p_pieces = log_density_pieces(q), log_density_pieces(p)
    if q_pieces is not None and p_pieces is not None:
        log_ratio = _analytic_log_ratio(q_pieces, p_pieces)
        LOGGER.debug("Analytic log density ratio of %r to %r: %s", q, p, log_ratio)
    else:
        log_ratio = _grid_log_ratio(q, p)
        LOGGER.debug("Grid log density ratio of %r to %r: %s", q, p, log_ratio)
    return log_ratio


def density_ratio_sup(q: ParametricDistribution, p: ParametricDistribution) -> float:
    """
    Supremum over the support of p of density(q) / density(p).

    Pairs in the analytic dispatch table are maximized exactly over their
    piecewise-quadratic log-densities. Other non-atomic pairs are evaluated on
    a grid covering all but 1e-12 of p's mass, with the tail classes deciding
    finiteness beyond the grid.

    Returns:
        The supremum, ``math.inf`` when the support of q is not contained in
        that of p or q has a heavier tail than p on either side. Ratios beyond
        the float range also come back as ``math.inf``; use
        ``log_density_ratio_sup`` to tell them apart.

    Raises:
        UnsupportedPair: for point masses and mixtures containing them.
    """
    log_ratio = log_density_ratio_sup(q, p)
    if log_ratio >= MAX_LOG_FLOAT:
        return math.inf
    return math.exp(log_ratio)


@dataclass(frozen=True)
class DensityCurve:
    """
    Density of a law sampled on a grid, for plot data.
    """

    name: str
    xs: FloatArray = field(repr=False)
    values: FloatArray = field(repr=False)


def density_curve(
    name: str, dist: ParametricDistribution, lower: float, upper: float, points: int
) -> DensityCurve:
    """
    Sample the density of ``dist`` on an even grid over [lower, upper].
    """
    xs = np.linspace(lower, upper, points)
    return DensityCurve(name, xs, dist.pdf(xs))
