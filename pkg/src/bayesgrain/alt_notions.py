"""
Stricter notions of rationalizable beliefs and the ladder they form.

A Bayes-plausible ensemble averages back to the prior. The reweighting
condition asks for strictly positive weights on the realized posteriors whose
barycenter is the prior. Each notion implies the next, and both imply
consistency with misspecified Bayesian updating.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from bayesgrain.error import LadderViolation
from bayesgrain.lp import LinearProgram, LPStatus, solve
from bayesgrain.measures import (
    FLOAT_TOLERANCE,
    FiniteDistribution,
    FiniteEnsemble,
    Prob,
    average_posterior,
)
from bayesgrain.rationalizer import (
    Consistent,
    check_finite_support,
    require_finite_posteriors,
)

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SYCertificate:
    """
    Strictly positive weights over the realized posteriors whose barycenter is
    the prior.

    Attributes:
        lambdas: One weight per ensemble entry, in entry order.
        delta: The smallest weight, as maximized by the feasibility program.
    """

    lambdas: tuple[Prob, ...]
    delta: Prob


@dataclass(frozen=True)
class Infeasible:
    """
    No strictly positive reweighting reproduces the prior.
    """

    delta: Prob | None = None


@dataclass(frozen=True)
class NotionLadder:
    bayes_plausible: bool
    shmaya_yariv: bool
    misspecified_bayesian: bool


def _exact(prior: FiniteDistribution, ensemble: FiniteEnsemble) -> bool:
    return prior.exact and all(
        isinstance(p, FiniteDistribution) and p.exact for p in ensemble.posteriors
    )


def bayes_plausibility_test(
    prior: FiniteDistribution, ensemble: FiniteEnsemble
) -> bool:
    """
    Whether the average posterior equals the prior.
    """
    require_finite_posteriors(prior, ensemble)
    average = average_posterior(ensemble)
    assert isinstance(average, FiniteDistribution)  # nosec B101
    return average.isclose(prior)


def shmaya_yariv_test(
    prior: FiniteDistribution, ensemble: FiniteEnsemble
) -> SYCertificate | Infeasible:
    """
    Search for weights λ over the realized posteriors with every λ_j > 0,
    Σ λ_j = 1 and Σ λ_j·μ_j = prior.

    Maximizes the smallest weight δ with the in-repo simplex, substituting
    λ_j = y_j + δ with y_j, δ >= 0. The prior lies in the relative interior of
    the convex hull of the posteriors exactly when the optimum is positive.

    Returns:
        A certificate when δ* > 0 (exactly, or above 1e-9 in float mode),
        otherwise Infeasible carrying δ* when the program was feasible.
    """
    posteriors = require_finite_posteriors(prior, ensemble)
    exact = _exact(prior, ensemble)
    n = len(posteriors)
    one: Prob = Fraction(1) if exact else 1.0

    def num(value: Prob) -> Prob:
        return Fraction(value) if exact else float(value)

    # variables: y_1..y_n, delta
    rows: list[tuple[Prob, ...]] = [tuple([one] * n + [num(n)])]
    rhs: list[Prob] = [one]
    for i in range(len(prior.states)):
        coefficients = [num(p.probs[i]) for p in posteriors]
        rows.append(tuple(coefficients + [sum(coefficients, num(0))]))
        rhs.append(num(prior.probs[i]))
    program = LinearProgram(
        objective=tuple([num(0)] * n + [one]), equalities=tuple(rows), rhs=tuple(rhs)
    )
    solution = solve(program, exact=exact)
    if solution.status is not LPStatus.OPTIMAL or solution.x is None:
        LOGGER.debug("Barycenter program %s", solution.status.value)
        return Infeasible()

    delta = solution.x[-1]
    threshold: Prob = 0 if exact else FLOAT_TOLERANCE
    if delta <= threshold:
        return Infeasible(delta)
    lambdas = tuple(y + delta for y in solution.x[:-1])
    LOGGER.debug("Barycenter weights %s with minimum %s", lambdas, delta)
    return SYCertificate(lambdas, delta)


def classify(prior: FiniteDistribution, ensemble: FiniteEnsemble) -> NotionLadder:
    """
    Run the three tests and check that each notion implies the next.

    Raises:
        LadderViolation: when an implication fails.
    """
    plausible = bayes_plausibility_test(prior, ensemble)
    reweighting = isinstance(shmaya_yariv_test(prior, ensemble), SYCertificate)
    misspecified = isinstance(check_finite_support(prior, ensemble), Consistent)
    if (plausible and not reweighting) or (reweighting and not misspecified):
        raise LadderViolation(plausible, reweighting, misspecified)
    return NotionLadder(plausible, reweighting, misspecified)
