"""
Belief panels: period-0 and period-1 beliefs reported by a population of
agents, aggregated into the observed prior and distribution of posteriors.
"""

from __future__ import annotations

import csv
import logging
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import pydantic as pdc

from bayesgrain.error import HeterogeneousPriors, ParseError, ValidationError
from bayesgrain.instance import (
    Mode,
    ParametricDocument,
    ProblemInstance,
    parametric_from_document,
)
from bayesgrain.measures import (
    EnsembleEntry,
    FiniteDistribution,
    FiniteEnsemble,
    ParametricDistribution,
    Prob,
    to_prob,
)

LOGGER = logging.getLogger(__name__)

PANEL_COLUMNS = ("agent", "period", "belief")

Belief = FiniteDistribution | ParametricDistribution


@dataclass(frozen=True)
class PanelRow:
    agent: str
    period: int
    belief: Belief


@dataclass(frozen=True)
class BeliefPanel:
    """
    One prior (period 0) and one posterior (period 1) per agent.
    """

    rows: tuple[PanelRow, ...]

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        if not rows:
            raise ValidationError("panel.rows", "the panel is empty")
        seen: Counter[tuple[str, int]] = Counter((r.agent, r.period) for r in rows)
        for index, row in enumerate(rows):
            if row.period not in (0, 1):
                raise ValidationError(
                    f"panel.rows[{index}].period",
                    f"period must be 0 or 1, got {row.period}",
                )
        for agent in dict.fromkeys(r.agent for r in rows):
            if seen[(agent, 0)] != 1 or seen[(agent, 1)] != 1:
                raise ValidationError(
                    "panel.rows",
                    f"agent {agent} needs exactly one period-0 and one period-1 belief",
                )
        object.__setattr__(self, "rows", rows)

    def agents(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.agent for r in self.rows))

    def beliefs(self, period: int) -> dict[str, Belief]:
        """
        Belief of every agent in the given period.
        """
        return {r.agent: r.belief for r in self.rows if r.period == period}


def aggregate_panel(panel: BeliefPanel, mode: Mode = Mode.RATIONAL) -> ProblemInstance:
    """
    Turn a panel into a problem instance: the common period-0 belief is the
    prior, and the distinct period-1 beliefs are the realized posteriors,
    weighted by their empirical frequencies.

    Weights are taken as observed; no correction for sampling error in finite
    panels is applied.

    Raises:
        HeterogeneousPriors: when agents disagree on the period-0 belief. The
            agents differing from the most common prior are listed.
    """
    priors = panel.beliefs(0)
    common, _ = Counter(priors.values()).most_common(1)[0]
    offending = [agent for agent, belief in priors.items() if belief != common]
    if offending:
        raise HeterogeneousPriors(offending)

    posteriors = panel.beliefs(1)
    counts = Counter(posteriors.values())
    total = len(posteriors)

    def weight(count: int) -> Prob:
        return Fraction(count, total) if mode.exact else count / total

    ensemble = FiniteEnsemble(
        tuple(EnsembleEntry(belief, weight(count)) for belief, count in counts.items())
    )
    LOGGER.info(
        "Aggregated %s agents into %s distinct posterior(s)", total, len(ensemble)
    )
    return ProblemInstance(common, ensemble, mode)


def _belief(
    text: str, states: Sequence[str] | None, mode: Mode, path: str
) -> Belief:
    text = text.strip()
    if text.startswith("{"):
        try:
            document = ParametricDocument.model_validate_json(text)
        except pdc.ValidationError as err:
            raise ValidationError(path, str(err.errors()[0]["msg"])) from err
        return parametric_from_document(document, path)
    values = [v.strip() for v in text.split(";")]
    labels = tuple(states) if states else tuple(f"x{i + 1}" for i in range(len(values)))
    if len(labels) != len(values):
        raise ValidationError(
            path, f"expected {len(labels)} probabilities, got {len(values)}"
        )
    try:
        probs = tuple(to_prob(v, mode.exact) for v in values)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise ValidationError(path, f"not a probability vector: {text!r}") from err
    try:
        return FiniteDistribution(labels, probs)
    except ValidationError as err:
        raise ValidationError(path, err.reason) from err


def load_panel_csv(
    path: str | Path, states: Sequence[str] | None = None, mode: Mode = Mode.RATIONAL
) -> BeliefPanel:
    """
    Read a panel from CSV with header ``agent,period,belief``.

    A belief is a semicolon-joined probability vector over ``states``
    (``x1, x2, ...`` when not given), or an inline JSON parametric document.

    Raises:
        ParseError: when the file cannot be read or lacks the header.
        ValidationError: for malformed rows, at ``panel.rows[i]``.
    """
    try:
        with open(path, encoding="utf-8", newline="") as panel_file:
            reader = csv.DictReader(panel_file)
            if reader.fieldnames is None or not set(PANEL_COLUMNS) <= set(
                reader.fieldnames
            ):
                raise ParseError(
                    str(path), f"expected header {','.join(PANEL_COLUMNS)}"
                )
            records = list(reader)
    except OSError as err:
        raise ParseError(str(path), err.strerror or str(err)) from err
    except csv.Error as err:
        raise ParseError(str(path), str(err)) from err

    rows = []
    for index, record in enumerate(records):
        at = f"panel.rows[{index}]"
        try:
            period = int(record["period"])
        except (TypeError, ValueError) as err:
            raise ValidationError(
                f"{at}.period", f"not an integer: {record['period']!r}"
            ) from err
        rows.append(
            PanelRow(
                (record["agent"] or "").strip(),
                period,
                _belief(record["belief"] or "", states, mode, f"{at}.belief"),
            )
        )
    LOGGER.debug("Read %s panel rows from %s", len(rows), path)
    return BeliefPanel(tuple(rows))
