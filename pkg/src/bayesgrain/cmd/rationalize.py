"""A module for constructing subjective models that rationalize beliefs."""

import logging
from typing import Any

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.rationalizer import (
    Consistent,
    ConsistencyVerdict,
    PartitionStrategy,
    check_finite_support,
    verify_model,
)
from bayesgrain.report import model_report_payload, verdict_payload

LOGGER = logging.getLogger(__name__)


class RationalizeCommand(ReportCommand):
    """
    Command building a subjective model over states × signals, including the
    reserved signal ⊖, under which the observed posteriors come out of
    Bayesian updating. Only finite state spaces have an explicit model.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.verdict: ConsistencyVerdict | None = None

    async def execute(self) -> None:
        instance = self.load()
        prior = instance.finite_prior()
        ensemble = instance.finite_ensemble()
        self.verdict = check_finite_support(
            prior,
            ensemble,
            instance.true_signals,
            PartitionStrategy(self.cli_args.partition),
        )
        self._payload = {"command": "rationalize", **verdict_payload(self.verdict)}
        if isinstance(self.verdict, Consistent) and self.verdict.model is not None:
            report = verify_model(
                self.verdict.model, prior, ensemble, instance.true_signals
            )
            self._payload["verification"] = model_report_payload(report)
            LOGGER.info(
                "Constructed a model with %s signals", len(self.verdict.model.signals)
            )
        else:
            LOGGER.info("No rationalizing model exists")
