"""
Decide whether a prior and a distribution over posteriors are consistent with
Bayesian updating under some subjective signal model, build such a model when
one exists, and verify candidate models.

A subjective model is a joint table over states × signals. Its signals are the
true signals, each labeled by the posterior it induces, plus the reserved
signal ``⊖`` that the true signal law never draws. Under the subjective model
``⊖`` absorbs the part of the prior that the average posterior does not
account for.
"""

from __future__ import annotations

import asyncio
import enum
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TypeAlias

from bayesgrain.error import (
    CommandMismatch,
    HypothesisViolated,
    InvalidParameterError,
    InvariantViolation,
    MixedRepresentation,
    NoGrainError,
    StateMismatch,
    UnsupportedPair,
    ValidationError,
)
from bayesgrain.grain import (
    GrainCertificate,
    NoGrain,
    NoGrainReason,
    TailRelation,
    TailVerdict,
    contains_grain_parametric,
    grain_decompose_finite,
    tail_order_compare,
    verify_certificate,
)
from bayesgrain.measures import (
    FLOAT_TOLERANCE,
    Exponential,
    FiniteDistribution,
    FiniteEnsemble,
    Laplace,
    Mixture,
    Normal,
    ParametricDistribution,
    PointMassFamily,
    PosteriorEnsemble,
    Prob,
    Truncated,
    Uniform,
    average_posterior,
    cell_average_posterior,
    is_close,
    support_contained,
)

LOGGER = logging.getLogger(__name__)

OMINUS = "⊖"
DEFAULT_CELL_WIDTH = 1.0
DEFAULT_CONCURRENCY = 8

Cell: TypeAlias = tuple[int, ...]


@dataclass(frozen=True)
class SubjectiveModel:
    """
    Joint subjective law over states × signals.

    Attributes:
        states: State labels, the rows of ``joint``.
        signals: Signal labels, the columns of ``joint``; always contains
            ``OMINUS``.
        joint: Probabilities Q(x, s), one row per state.
    """

    states: tuple[str, ...]
    signals: tuple[str, ...]
    joint: tuple[tuple[Prob, ...], ...]

    def __post_init__(self) -> None:
        if OMINUS not in self.signals:
            raise ValidationError(
                "model.signals", f"the reserved signal {OMINUS} is missing"
            )
        if len(set(self.signals)) != len(self.signals):
            raise ValidationError("model.signals", "signal labels must be distinct")
        if len(self.joint) != len(self.states) or any(
            len(row) != len(self.signals) for row in self.joint
        ):
            raise ValidationError(
                "model.joint", "joint table shape does not match labels"
            )
        cells = [v for row in self.joint for v in row]
        if any(v < 0 for v in cells):
            raise ValidationError(
                "model.joint", "joint probabilities must be nonnegative"
            )
        exact = all(isinstance(v, Fraction) for v in cells)
        total = sum(cells, Fraction(0) if exact else 0.0)
        if not is_close(total, 1 if exact else 1.0):
            raise ValidationError("model.joint", f"joint probabilities sum to {total}")

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for row in self.joint for v in row)

    def _zero(self) -> Prob:
        return Fraction(0) if self.exact else 0.0

    def x_marginal(self) -> FiniteDistribution:
        """
        Subjective marginal over states, Q_X.
        """
        return FiniteDistribution(
            self.states, tuple(sum(row, self._zero()) for row in self.joint)
        )

    def s_marginal(self) -> FiniteDistribution:
        """
        Subjective marginal over signals, Q_S.
        """
        return FiniteDistribution(
            self.signals,
            tuple(
                sum((row[j] for row in self.joint), self._zero())
                for j in range(len(self.signals))
            ),
        )

    def column(self, signal: str) -> tuple[Prob, ...]:
        j = self.signals.index(signal)
        return tuple(row[j] for row in self.joint)

    def kernel(self, signal: str) -> FiniteDistribution | None:
        """
        Posterior over states after ``signal``: the joint column normalized by
        Q_S(signal). None when the signal has no subjective mass.
        """
        column = self.column(signal)
        mass = sum(column, self._zero())
        if mass <= 0:
            return None
        if self.exact:
            return FiniteDistribution(self.states, tuple(v / mass for v in column))
        return FiniteDistribution(
            self.states, tuple(float(v) / float(mass) for v in column)
        )

    def joint_mass(self, states: Iterable[str], signals: Iterable[str]) -> Prob:
        """
        Q(D × E) for label subsets D of states and E of signals.
        """
        rows = [self.states.index(x) for x in set(states)]
        columns = [self.signals.index(s) for s in set(signals)]
        return sum((self.joint[i][j] for i in rows for j in columns), self._zero())


@dataclass(frozen=True)
class TrueSignalModel:
    """
    True signal law ℙ with each signal labeled by the posterior it induces.

    Attributes:
        signals: Signal labels; never the reserved ``OMINUS``.
        probs: True probability of each signal.
        posteriors: The posterior each signal stands for.
    """

    signals: tuple[str, ...]
    probs: tuple[Prob, ...]
    posteriors: tuple[FiniteDistribution, ...]

    def __post_init__(self) -> None:
        if OMINUS in self.signals:
            raise ValidationError("true_signals", f"{OMINUS} is reserved for the model")
        if len(set(self.signals)) != len(self.signals):
            raise ValidationError("true_signals", "signal labels must be distinct")
        if not len(self.signals) == len(self.probs) == len(self.posteriors):
            raise ValidationError(
                "true_signals", "one probability and posterior per signal"
            )
        # validates nonnegativity and total mass
        FiniteDistribution(self.signals, self.probs)

    @classmethod
    def from_ensemble(cls, ensemble: FiniteEnsemble) -> TrueSignalModel:
        """
        Identity labeling: one signal per realized posterior, drawn with the
        posterior's weight.
        """
        return cls(ensemble.labels(), ensemble.weights, ensemble.finite_posteriors())

    @property
    def exact(self) -> bool:
        return all(isinstance(p, Fraction) for p in self.probs)

    def law(self) -> FiniteDistribution:
        return FiniteDistribution(self.signals, self.probs)

    def label_of(self, posterior: FiniteDistribution) -> str:
        """
        First signal labeled with the given posterior.
        """
        return self.signals[self.posteriors.index(posterior)]


@dataclass(frozen=True)
class IntervalCell:
    """
    Cell [lower, upper) of a partition of posterior locations.
    """

    lower: float
    upper: float

    def __str__(self) -> str:
        return f"[{self.lower:g}, {self.upper:g})"


@dataclass(frozen=True)
class TailCellCertificate:
    """
    Analytic certificate for all cells beyond the horizon on one side: each
    such cell is bounded, and the prior has a continuous positive density on
    all of it, so the density ratio of the cell's average posterior is bounded.
    """

    side: str
    start: float
    reason: str


@dataclass(frozen=True)
class SupportViolation:
    state: str | None = None


@dataclass(frozen=True)
class TailViolation:
    """
    Posteriors whose tails are heavier than the prior's, as (entry index,
    verdict) pairs.
    """

    flagged: tuple[tuple[int, TailVerdict], ...]


@dataclass(frozen=True)
class NoPartitionFound:
    search_log: tuple[str, ...]
    cell: IntervalCell | None = None


@dataclass(frozen=True)
class UnboundedDensityRatio:
    radius: float | None = None


Witness: TypeAlias = (
    SupportViolation | TailViolation | NoPartitionFound | UnboundedDensityRatio
)


@dataclass(frozen=True)
class Consistent:
    """
    Consistency with a certificate per partition cell. Finite-state verdicts
    carry the constructed model; real-line verdicts carry certificates only.
    """

    model: SubjectiveModel | None
    certificates: tuple[GrainCertificate, ...]
    partition: tuple[Cell | IntervalCell, ...]
    tail_certificates: tuple[TailCellCertificate, ...] = ()


@dataclass(frozen=True)
class Inconsistent:
    witness: Witness


@dataclass(frozen=True)
class Undecided:
    reason: str


ConsistencyVerdict: TypeAlias = Consistent | Inconsistent | Undecided


class PartitionStrategy(str, enum.Enum):
    TRIVIAL = "trivial"
    SINGLETON = "singleton"


def trivial_partition(size: int) -> tuple[Cell, ...]:
    """
    A single cell holding every entry.
    """
    return (tuple(range(size)),)


def singleton_partition(size: int) -> tuple[Cell, ...]:
    """
    One cell per entry.
    """
    return tuple((i,) for i in range(size))


def _partition(strategy: PartitionStrategy, size: int) -> tuple[Cell, ...]:
    if strategy is PartitionStrategy.SINGLETON:
        return singleton_partition(size)
    return trivial_partition(size)


def require_finite_posteriors(
    prior: FiniteDistribution, ensemble: PosteriorEnsemble
) -> tuple[FiniteDistribution, ...]:
    if not isinstance(ensemble, FiniteEnsemble):
        raise CommandMismatch(
            "a finite-state prior needs a finite ensemble of posteriors"
        )
    posteriors = ensemble.finite_posteriors()
    for posterior in posteriors:
        if posterior.states != prior.states:
            raise StateMismatch(prior.states, posterior.states)
    return posteriors


@dataclass(frozen=True)
class ConditionResult:
    passed: bool
    messages: tuple[str, ...] = ()


@dataclass(frozen=True)
class ModelReport:
    """
    Outcome of checking a subjective model against observed beliefs:
    (a) the subjective state marginal equals the prior, (b) every signal the
    true law draws has subjective mass, (c) each such signal updates to its
    labeled posterior and the true law pushes forward to the ensemble.
    """

    x_marginal: ConditionResult
    absolute_continuity: ConditionResult
    posteriors: ConditionResult

    @property
    def passed(self) -> bool:
        return (
            self.x_marginal.passed
            and self.absolute_continuity.passed
            and self.posteriors.passed
        )

    def __bool__(self) -> bool:
        return self.passed


def _failed_report(message: str) -> ModelReport:
    failed = ConditionResult(False, (message,))
    return ModelReport(failed, failed, failed)


def verify_model(
    model: SubjectiveModel,
    prior: FiniteDistribution,
    ensemble: FiniteEnsemble,
    true_signals: TrueSignalModel | None = None,
    tol: Prob | None = None,
    strict_support: bool = False,
) -> ModelReport:
    """
    Check the three conditions of consistency for a candidate model.

    Args:
        model: The subjective model.
        prior: Observed prior.
        ensemble: Observed distribution over posteriors.
        true_signals: True signal law; defaults to the identity labeling.
        tol: Tolerance for every identity. None compares exactly when all
            inputs are exact and to ``FLOAT_TOLERANCE`` otherwise.
        strict_support: Also require the zero pattern of each updated
            posterior to match its label exactly.

    Returns:
        A per-condition report. Misaligned labels fail every condition.
    """
    if true_signals is None:
        true_signals = TrueSignalModel.from_ensemble(ensemble)
    if model.states != prior.states:
        return _failed_report(
            f"model states {list(model.states)} differ from prior states"
        )
    missing = [s for s in true_signals.signals if s not in model.signals]
    if missing:
        return _failed_report(f"true signals missing from the model: {missing}")

    marginal = model.x_marginal()
    a_messages = [
        f"Q_X({x}) = {q_x}, prior = {p_x}"
        for x, q_x, p_x in zip(prior.states, marginal.probs, prior.probs, strict=True)
        if not is_close(q_x, p_x, tol) or (strict_support and (q_x > 0) != (p_x > 0))
    ]

    s_marginal = model.s_marginal()
    b_messages = [
        f"signal {s} has true probability {p} but no subjective mass"
        for s, p in zip(true_signals.signals, true_signals.probs, strict=True)
        if p > 0 and s_marginal.prob(s) <= 0
    ]

    c_messages: list[str] = []
    drawn: dict[FiniteDistribution, Prob] = {}
    for s, p, labeled in zip(
        true_signals.signals, true_signals.probs, true_signals.posteriors, strict=True
    ):
        if p <= 0:
            continue
        drawn[labeled] = drawn.get(labeled, 0) + p
        updated = model.kernel(s)
        if updated is None:
            c_messages.append(f"signal {s} cannot be updated on")
            continue
        if not updated.isclose(labeled, tol):
            c_messages.append(f"signal {s} updates to {updated}, labeled {labeled}")
        elif strict_support and updated.support() != labeled.support():
            c_messages.append(f"signal {s} updates to a posterior with another support")
    for entry in ensemble.entries:
        weight = drawn.pop(entry.posterior, 0)
        if not is_close(weight, entry.weight, tol):
            c_messages.append(
                f"posterior {entry.posterior} drawn w.p. {weight}, "
                f"observed {entry.weight}"
            )
    for posterior, weight in drawn.items():
        c_messages.append(
            f"posterior {posterior} drawn w.p. {weight} but never observed"
        )

    report = ModelReport(
        ConditionResult(not a_messages, tuple(a_messages)),
        ConditionResult(not b_messages, tuple(b_messages)),
        ConditionResult(not c_messages, tuple(c_messages)),
    )
    LOGGER.debug("Model verification: %s", report)
    return report


def check_signal_law(ensemble: FiniteEnsemble, true_signals: TrueSignalModel) -> None:
    """
    The true signal law must push forward to the ensemble weights.
    """
    drawn: dict[FiniteDistribution, Prob] = {}
    for p, labeled in zip(true_signals.probs, true_signals.posteriors, strict=True):
        drawn[labeled] = drawn.get(labeled, 0) + p
    for entry in ensemble.entries:
        if not is_close(drawn.pop(entry.posterior, 0), entry.weight):
            raise ValidationError(
                "true_signals",
                f"signal law does not draw {entry.posterior} w.p. {entry.weight}",
            )
    if drawn:
        raise ValidationError(
            "true_signals", "signals are labeled with unobserved posteriors"
        )


def construct_subjective_model(
    prior: FiniteDistribution,
    ensemble: FiniteEnsemble,
    true_signals: TrueSignalModel | None = None,
    partition: Sequence[Cell] | None = None,
) -> SubjectiveModel:
    """
    Build a subjective model that rationalizes the ensemble.

    Each cell k gets the maximal grain weight ε_k of its average posterior in
    the prior. A true signal s from cell k has subjective mass ε_k·ℙ(s) and
    updates to its labeled posterior. The reserved signal ``⊖`` carries the
    remaining mass and updates to the mixture of the cell residuals.

    Args:
        prior: Observed prior.
        ensemble: Observed finite ensemble over the prior's states.
        true_signals: True signal law; defaults to the identity labeling.
        partition: Cells of ensemble entries; defaults to a single cell.

    Returns:
        The subjective model.

    Raises:
        NoGrainError: when the prior has no grain of some cell's average
            posterior.
    """
    posteriors = require_finite_posteriors(prior, ensemble)
    if true_signals is None:
        true_signals = TrueSignalModel.from_ensemble(ensemble)
    check_signal_law(ensemble, true_signals)
    cells = (
        tuple(partition) if partition is not None else trivial_partition(len(ensemble))
    )

    exact = (
        prior.exact
        and all(p.exact for p in posteriors)
        and all(isinstance(w, Fraction) for w in ensemble.weights)
        and true_signals.exact
    )
    zero: Prob = Fraction(0) if exact else 0.0
    one: Prob = Fraction(1) if exact else 1.0

    def num(value: Prob) -> Prob:
        return value if exact else float(value)

    cell_of: dict[int, int] = {}
    epsilons: list[Prob] = []
    cell_weights: list[Prob] = []
    residuals: list[FiniteDistribution | None] = []
    for k, cell in enumerate(cells):
        for index in cell:
            cell_of[index] = k
        result = grain_decompose_finite(prior, average_posterior(ensemble, cell))
        if isinstance(result, NoGrain):
            raise NoGrainError(
                cell, f"{result.reason.value} at state {result.witness_state}"
            )
        epsilons.append(num(result.epsilon))
        cell_weights.append(sum((num(ensemble.weights[i]) for i in cell), zero))
        residual = result.residual
        residuals.append(residual if isinstance(residual, FiniteDistribution) else None)
        LOGGER.debug("Cell %s: epsilon = %s", cell, result.epsilon)
    if sorted(cell_of) != list(range(len(ensemble))):
        raise ValidationError(
            "partition", "cells must cover every ensemble entry exactly once"
        )

    signal_mass: list[Prob] = []
    for p, labeled in zip(true_signals.probs, true_signals.posteriors, strict=True):
        k = cell_of[posteriors.index(labeled)]
        signal_mass.append(epsilons[k] * num(p))
    ominus_mass = one - sum(
        (e * w for e, w in zip(epsilons, cell_weights, strict=True)), zero
    )
    if not exact and ominus_mass < FLOAT_TOLERANCE:
        ominus_mass = 0.0

    if ominus_mass > 0:
        ominus_posterior = [zero] * len(prior.states)
        for eps, weight, residual in zip(
            epsilons, cell_weights, residuals, strict=True
        ):
            if residual is None:
                continue
            share = (one - eps) * weight / ominus_mass
            for i, r_x in enumerate(residual.probs):
                ominus_posterior[i] += share * num(r_x)
    else:
        # ⊖ carries no mass, any update rule is admissible there
        ominus_posterior = [num(p) for p in prior.probs]

    joint = tuple(
        tuple(
            num(labeled.probs[i]) * mass
            for labeled, mass in zip(true_signals.posteriors, signal_mass, strict=True)
        )
        + (ominus_posterior[i] * ominus_mass,)
        for i in range(len(prior.states))
    )
    model = SubjectiveModel(prior.states, true_signals.signals + (OMINUS,), joint)
    LOGGER.debug("Constructed model with Q_S(%s) = %s", OMINUS, ominus_mass)
    return model


def check_finite_support(
    prior: FiniteDistribution,
    ensemble: PosteriorEnsemble,
    true_signals: TrueSignalModel | None = None,
    strategy: PartitionStrategy = PartitionStrategy.TRIVIAL,
) -> ConsistencyVerdict:
    """
    Decide consistency for a finite-state prior and a finite ensemble.

    The prior must contain a grain of the average posterior. The equivalent
    condition that it contains a grain of every realized posterior is
    evaluated as well and must agree. On success the rationalizing model is
    built over the requested partition and verified.

    Raises:
        StateMismatch: when posteriors and prior use different states.
        InvariantViolation: when the two equivalent conditions disagree or the
            constructed model fails verification.
    """
    posteriors = require_finite_posteriors(prior, ensemble)
    assert isinstance(ensemble, FiniteEnsemble)  # nosec B101
    average = average_posterior(ensemble)
    assert isinstance(average, FiniteDistribution)  # nosec B101
    on_average = grain_decompose_finite(prior, average)
    on_each = [grain_decompose_finite(prior, p) for p in posteriors]
    every_posterior = all(isinstance(r, GrainCertificate) for r in on_each)
    if isinstance(on_average, GrainCertificate) != every_posterior:
        raise InvariantViolation(
            "grain of the average posterior and grain of every posterior disagree"
        )
    if isinstance(on_average, NoGrain):
        LOGGER.info(
            "Inconsistent: posterior mass on zero-prior state %s",
            on_average.witness_state,
        )
        return Inconsistent(SupportViolation(on_average.witness_state))

    cells = _partition(strategy, len(ensemble))
    model = construct_subjective_model(prior, ensemble, true_signals, cells)
    certificates = []
    for cell in cells:
        result = grain_decompose_finite(prior, average_posterior(ensemble, cell))
        assert isinstance(result, GrainCertificate)  # nosec B101
        certificates.append(result)
    report = verify_model(model, prior, ensemble, true_signals)
    if not report:
        raise InvariantViolation(f"constructed model fails verification: {report}")
    LOGGER.info("Consistent with %s cell(s)", len(cells))
    return Consistent(model, tuple(certificates), cells)


def _positive_continuous_density(dist: ParametricDistribution) -> bool:
    if isinstance(dist, (Normal, Laplace, Exponential, Uniform)):
        return True
    if isinstance(dist, Truncated):
        return _positive_continuous_density(dist.inner)
    if isinstance(dist, Mixture):
        if not all(_positive_continuous_density(c) for _, c in dist.components):
            return False
        bounds = sorted(c.support() for _, c in dist.components)
        reach = bounds[0][1]
        for lo, hi in bounds[1:]:
            if lo > reach:
                return False
            reach = max(reach, hi)
        return True
    return False


def support_inclusion_test(
    prior: FiniteDistribution | ParametricDistribution,
    avg_posterior: FiniteDistribution | ParametricDistribution,
) -> bool:
    """
    Whether the support of the average posterior lies in the support of the
    prior. This decides consistency for finite state spaces, and for priors
    with a continuous positive density whose average posterior is compactly
    supported.

    Raises:
        HypothesisViolated: when a parametric prior lacks a continuous positive
            density on its support.
    """
    if isinstance(prior, FiniteDistribution) and isinstance(
        avg_posterior, FiniteDistribution
    ):
        if prior.states != avg_posterior.states:
            raise StateMismatch(prior.states, avg_posterior.states)
        return avg_posterior.support() <= prior.support()
    if isinstance(prior, ParametricDistribution) and isinstance(
        avg_posterior, ParametricDistribution
    ):
        if not _positive_continuous_density(prior):
            raise HypothesisViolated(f"{prior!r} has no continuous positive density")
        return support_contained(avg_posterior, prior)
    raise MixedRepresentation(
        "prior and average posterior use different representations"
    )


def tail_inconsistency_test(
    prior: ParametricDistribution, ensemble: PosteriorEnsemble
) -> TailViolation | None:
    """
    Flag the realized posteriors whose tails are heavier than the prior's.
    Point-mass families never produce a violation.

    Raises:
        HypothesisViolated: for a prior with bounded support.
    """
    if all(math.isfinite(b) for b in prior.support()):
        raise HypothesisViolated("tail comparison needs a prior with unbounded support")
    if isinstance(ensemble, PointMassFamily):
        return None
    flagged = []
    for index, posterior in enumerate(ensemble.posteriors):
        if not isinstance(posterior, ParametricDistribution):
            raise MixedRepresentation("a parametric prior needs parametric posteriors")
        verdict = tail_order_compare(prior, posterior)
        if verdict.relation is TailRelation.Q_HEAVIER:
            LOGGER.debug("Posterior %s has heavier tails: %s", index, verdict)
            flagged.append((index, verdict))
    return TailViolation(tuple(flagged)) if flagged else None


@dataclass(frozen=True)
class _CellOutcome:
    cell: IntervalCell
    result: GrainCertificate | NoGrain | Undecided
    log_line: str = field(default="")


def _partition_cells(
    prior: ParametricDistribution, family: PointMassFamily, cell_width: float
) -> tuple[list[IntervalCell], tuple[float, float]]:
    if prior.atomic:
        raise HypothesisViolated("the partition prover needs a non-atomic prior")
    if not cell_width > 0 or not math.isfinite(cell_width):
        raise InvalidParameterError("cell width must be a positive number")
    law = family.location_law
    p_lo, p_hi = prior.coverage_interval()
    l_lo, l_hi = law.coverage_interval()
    first = math.floor(min(p_lo, l_lo) / cell_width)
    last = math.ceil(max(p_hi, l_hi) / cell_width)
    cells = [
        IntervalCell(k * cell_width, (k + 1) * cell_width)
        for k in range(first, last)
        if law.log_mass(k * cell_width, (k + 1) * cell_width) > -math.inf
    ]
    return cells, (first * cell_width, last * cell_width)


def _evaluate_cell(
    prior: ParametricDistribution, family: PointMassFamily, cell: IntervalCell
) -> _CellOutcome:
    average = cell_average_posterior(family, cell.lower, cell.upper)
    try:
        result = contains_grain_parametric(prior, average)
    except UnsupportedPair as err:
        return _CellOutcome(cell, Undecided(str(err)), f"cell {cell}: undecided")
    if isinstance(result, NoGrain):
        return _CellOutcome(
            cell, result, f"cell {cell}: no grain ({result.reason.value})"
        )
    report = verify_certificate(prior, average, result)
    if not report:
        raise InvariantViolation(
            f"certificate for cell {cell} fails verification: {report}"
        )
    return _CellOutcome(
        cell, result, f"cell {cell}: epsilon = {float(result.epsilon):.6g}"
    )


def _tail_certificates(
    prior: ParametricDistribution, family: PointMassFamily, horizon: tuple[float, float]
) -> tuple[list[TailCellCertificate], IntervalCell | None]:
    law_lo, law_hi = family.location_law.support()
    prior_lo, prior_hi = prior.support()
    certificates = []
    for side, start, beyond, covered in (
        ("left", horizon[0], law_lo < horizon[0], prior_lo == -math.inf),
        ("right", horizon[1], law_hi > horizon[1], prior_hi == math.inf),
    ):
        if not beyond:
            continue
        certified = covered and _positive_continuous_density(prior)
        if not certified or family.location_law.atomic:
            if side == "right":
                return certificates, IntervalCell(start, math.inf)
            return certificates, IntervalCell(-math.inf, start)
        certificates.append(
            TailCellCertificate(
                side, start, "bounded cells against a continuous positive prior density"
            )
        )
    return certificates, None


def _combine(
    outcomes: Sequence[_CellOutcome],
    prior: ParametricDistribution,
    family: PointMassFamily,
    horizon: tuple[float, float],
) -> ConsistencyVerdict:
    log: list[str] = []
    certificates: list[GrainCertificate] = []
    for outcome in outcomes:
        log.append(outcome.log_line)
        if isinstance(outcome.result, Undecided):
            return outcome.result
        if isinstance(outcome.result, NoGrain):
            LOGGER.info("No grain on cell %s", outcome.cell)
            return Inconsistent(NoPartitionFound(tuple(log), outcome.cell))
        certificates.append(outcome.result)
    tails, failing = _tail_certificates(prior, family, horizon)
    if failing is not None:
        log.append(f"tail cell {failing}: prior does not cover the location law")
        return Inconsistent(NoPartitionFound(tuple(log), failing))
    LOGGER.info("Certified %s cells and %s tail side(s)", len(certificates), len(tails))
    return Consistent(
        None, tuple(certificates), tuple(o.cell for o in outcomes), tuple(tails)
    )


def partition_prover(
    prior: ParametricDistribution,
    family: PointMassFamily,
    cell_width: float = DEFAULT_CELL_WIDTH,
) -> ConsistencyVerdict:
    """
    Certify the grain condition over a partition of posterior locations into
    intervals [k·w, (k+1)·w).

    Every cell up to a horizon covering all but 1e-12 of the mass of both laws
    is certified numerically, in cell order. Cells beyond the horizon are
    bounded, so their average posteriors have bounded density ratios against
    a prior with a continuous positive density there; they get one analytic
    certificate per side.

    Raises:
        HypothesisViolated: for an atomic prior.
    """
    cells, horizon = _partition_cells(prior, family, cell_width)
    LOGGER.debug("Partition prover over %s cells, horizon %s", len(cells), horizon)
    outcomes = [_evaluate_cell(prior, family, cell) for cell in cells]
    return _combine(outcomes, prior, family, horizon)


async def prove_partition(
    prior: ParametricDistribution,
    family: PointMassFamily,
    cell_width: float = DEFAULT_CELL_WIDTH,
    concurrency: int = DEFAULT_CONCURRENCY,
) -> ConsistencyVerdict:
    """
    Concurrent variant of ``partition_prover``. Cells are evaluated in worker
    threads, at most ``concurrency`` at a time, and combined in cell order.
    """
    cells, horizon = _partition_cells(prior, family, cell_width)
    semaphore = asyncio.Semaphore(concurrency)

    async def evaluate(cell: IntervalCell) -> _CellOutcome:
        async with semaphore:
            return await asyncio.to_thread(_evaluate_cell, prior, family, cell)

    outcomes = await asyncio.gather(*(evaluate(cell) for cell in cells))
    return _combine(outcomes, prior, family, horizon)


def check_continuous(
    prior: ParametricDistribution,
    ensemble: PosteriorEnsemble,
    cell_width: float = DEFAULT_CELL_WIDTH,
) -> ConsistencyVerdict:
    """
    Decide consistency on the real line.

    Point-mass families go through the partition prover. Finite ensembles of
    parametric posteriors are first screened by tail comparison, then the
    prior must contain a grain of the average posterior.
    """
    if isinstance(ensemble, PointMassFamily):
        return partition_prover(prior, ensemble, cell_width)
    if not all(math.isfinite(b) for b in prior.support()):
        violation = tail_inconsistency_test(prior, ensemble)
        if violation is not None:
            LOGGER.info(
                "Inconsistent: %s posterior(s) with heavier tails",
                len(violation.flagged),
            )
            return Inconsistent(violation)
    if not all(isinstance(p, ParametricDistribution) for p in ensemble.posteriors):
        raise MixedRepresentation("a parametric prior needs parametric posteriors")
    average = average_posterior(ensemble)
    assert isinstance(average, ParametricDistribution)  # nosec B101
    try:
        result = contains_grain_parametric(prior, average)
    except UnsupportedPair as err:
        return Undecided(str(err))
    if isinstance(result, NoGrain):
        if result.reason is NoGrainReason.SUPPORT_VIOLATION:
            return Inconsistent(SupportViolation())
        return Inconsistent(UnboundedDensityRatio(result.radius))
    return Consistent(None, (result,), trivial_partition(len(ensemble)))
