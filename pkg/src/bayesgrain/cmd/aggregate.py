"""A module for turning a belief panel into a problem instance."""

import logging

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.instance import Mode
from bayesgrain.panel import aggregate_panel, load_panel_csv
from bayesgrain.report import instance_payload

LOGGER = logging.getLogger(__name__)


class AggregateCommand(ReportCommand):
    """
    Command reading agents' period-0 and period-1 beliefs from CSV and
    emitting the problem instance they define: the common prior and the
    empirical distribution of posteriors.
    """

    async def execute(self) -> None:
        mode = Mode(self.cli_args.mode or Mode.RATIONAL)
        panel = load_panel_csv(self.cli_args.panel, self.cli_args.states, mode)
        self.instance = aggregate_panel(panel, mode)
        LOGGER.info("Aggregated %s agents", len(panel.agents()))
        self._payload = instance_payload(self.instance)
