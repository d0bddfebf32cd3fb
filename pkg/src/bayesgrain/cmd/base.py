"""A command execution module."""

import logging
from abc import ABC, abstractmethod
from typing import Any

from bayesgrain.instance import Mode, ProblemInstance, load_instance
from bayesgrain.report import (
    PlotRow,
    canonical_json,
    plot_rows,
    write_plot_csv,
    write_text,
)

LOGGER = logging.getLogger(__name__)


class Command(ABC):
    """An abstract base class for command execution."""

    def __init__(self, cli_args: Any, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.cli_args = cli_args
        self._exit_code = 0

    @property
    def exit_code(self) -> int:
        """
        Get the command exit code.
        """
        return self._exit_code

    @exit_code.setter
    def exit_code(self, value: int) -> None:
        if value < 0 or value > 255:
            raise ValueError("Exit code must be in range <0, 255>.")

        self._exit_code = value

    @property
    def name(self) -> str:
        """
        Name of the command, used for logging purposes.
        """
        return self.__class__.__name__

    @abstractmethod
    async def execute(self) -> Any:
        """
        Execute the command.
        """

    @abstractmethod
    async def save(self) -> None:
        """
        Save the command output.
        """


class ReportCommand(Command, ABC):
    """
    A base class for commands emitting a JSON report to ``--output`` or
    stdout, and plot data to ``--plot-data`` when requested.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self._payload: dict[str, Any] | None = None
        self.instance: ProblemInstance | None = None

    @property
    def payload(self) -> dict[str, Any] | None:
        """
        Get the report payload.
        """
        return self._payload

    def load(self) -> ProblemInstance:
        """
        Load the problem instance named on the command line, applying the
        ``--mode`` override.
        """
        mode = getattr(self.cli_args, "mode", None)
        self.instance = load_instance(
            self.cli_args.instance, Mode(mode) if mode is not None else None
        )
        return self.instance

    def plot_rows(self) -> list[PlotRow]:
        """
        Plot data of the loaded instance.
        """
        return plot_rows(self.instance) if self.instance is not None else []

    async def save(self) -> None:
        """
        Write the report and, if requested, the plot data.
        """
        if self._payload is None:
            return
        await write_text(
            getattr(self.cli_args, "output", None), canonical_json(self._payload)
        )
        plot_data = getattr(self.cli_args, "plot_data", None)
        if plot_data is not None:
            await write_plot_csv(plot_data, self.plot_rows())
