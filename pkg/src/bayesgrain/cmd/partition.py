"""A module for certifying the grain condition over a partition of locations."""

import logging
from typing import Any

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.error import CommandMismatch
from bayesgrain.measures import PointMassFamily
from bayesgrain.rationalizer import (
    Consistent,
    ConsistencyVerdict,
    Inconsistent,
    NoPartitionFound,
    prove_partition,
)
from bayesgrain.report import verdict_payload

LOGGER = logging.getLogger(__name__)


class PartitionCommand(ReportCommand):
    """
    Command certifying, cell by cell, that the prior contains a grain of the
    average posterior over each interval [k·w, (k+1)·w) of posterior
    locations. Cells are evaluated concurrently.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.verdict: ConsistencyVerdict | None = None

    async def execute(self) -> None:
        instance = self.load()
        prior = instance.parametric_prior()
        if not isinstance(instance.ensemble, PointMassFamily):
            raise CommandMismatch(
                "partition needs a real-line instance with a point-mass family"
            )
        LOGGER.info(
            "Proving the partition condition with cell width %s", self.cli_args.width
        )
        self.verdict = await prove_partition(
            prior, instance.ensemble, self.cli_args.width, self.cli_args.concurrency
        )
        self._payload = {
            "command": "partition",
            "width": self.cli_args.width,
            **verdict_payload(self.verdict),
        }
        if isinstance(self.verdict, Consistent):
            LOGGER.info("Certified %s cells", len(self.verdict.certificates))
        elif isinstance(self.verdict, Inconsistent) and isinstance(
            self.verdict.witness, NoPartitionFound
        ):
            LOGGER.info("No certificate for cell %s", self.verdict.witness.cell)
