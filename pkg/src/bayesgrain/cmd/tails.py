"""A module for comparing posterior tails against the prior."""

import logging

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.error import CommandMismatch
from bayesgrain.grain import TailRelation, tail_order_compare
from bayesgrain.measures import FiniteEnsemble, ParametricDistribution
from bayesgrain.report import tail_verdict_payload

LOGGER = logging.getLogger(__name__)


class TailsCommand(ReportCommand):
    """
    Command comparing the tail of every realized posterior with the prior's.
    A posterior with heavier tails than the prior cannot come out of Bayesian
    updating under any subjective model.
    """

    async def execute(self) -> None:
        instance = self.load()
        prior = instance.parametric_prior()
        if not isinstance(instance.ensemble, FiniteEnsemble):
            raise CommandMismatch(
                "tails compares realized parametric posteriors; point-mass "
                "families never have heavier tails than the prior"
            )
        ensemble = instance.ensemble
        rows = []
        for label, posterior in zip(
            ensemble.labels(), ensemble.posteriors, strict=True
        ):
            assert isinstance(posterior, ParametricDistribution)  # nosec B101
            verdict = tail_order_compare(prior, posterior)
            LOGGER.info("Posterior %s: %s", label, verdict.relation.value)
            rows.append({"label": label, **tail_verdict_payload(verdict)})
        self._payload = {
            "command": "tails",
            "posteriors": rows,
            "inconsistent": any(
                r["relation"] is TailRelation.Q_HEAVIER for r in rows
            ),
        }
