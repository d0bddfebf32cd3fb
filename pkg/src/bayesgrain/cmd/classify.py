"""A module for placing observed beliefs on the ladder of rationality notions."""

import logging

from bayesgrain.alt_notions import classify, shmaya_yariv_test
from bayesgrain.cmd.base import ReportCommand
from bayesgrain.report import ladder_payload

LOGGER = logging.getLogger(__name__)


class ClassifyCommand(ReportCommand):
    """
    Command reporting which of Bayes plausibility, positive reweighting to the
    prior and consistency with misspecified updating the beliefs satisfy.
    """

    async def execute(self) -> None:
        instance = self.load()
        prior = instance.finite_prior()
        ensemble = instance.finite_ensemble()
        ladder = classify(prior, ensemble)
        LOGGER.info("Notion ladder: %s", ladder)
        self._payload = {
            "command": "classify",
            **ladder_payload(ladder, shmaya_yariv_test(prior, ensemble)),
        }
