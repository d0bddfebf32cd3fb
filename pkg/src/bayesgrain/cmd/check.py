"""A module for deciding consistency of observed beliefs."""

import logging
from typing import Any

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.error import UnsupportedPair
from bayesgrain.measures import FiniteDistribution
from bayesgrain.rationalizer import (
    ConsistencyVerdict,
    PartitionStrategy,
    Undecided,
    check_continuous,
    check_finite_support,
)
from bayesgrain.report import verdict_payload

LOGGER = logging.getLogger(__name__)


class CheckCommand(ReportCommand):
    """
    Command deciding whether a prior and a distribution over posteriors are
    consistent with Bayesian updating under some subjective signal model.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.verdict: ConsistencyVerdict | None = None

    async def execute(self) -> None:
        instance = self.load()
        if isinstance(instance.prior, FiniteDistribution):
            self.verdict = check_finite_support(
                instance.prior,
                instance.ensemble,
                instance.true_signals,
                PartitionStrategy(self.cli_args.partition),
            )
        else:
            try:
                self.verdict = check_continuous(
                    instance.prior, instance.ensemble, self.cli_args.width
                )
            except UnsupportedPair as err:
                LOGGER.warning("Undecided: %s", err)
                self.verdict = Undecided(str(err))
        LOGGER.info("Verdict: %s", type(self.verdict).__name__)
        self._payload = {"command": "check", **verdict_payload(self.verdict)}
