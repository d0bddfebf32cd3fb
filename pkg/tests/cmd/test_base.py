from pathlib import Path
from typing import Any
from unittest.mock import MagicMock

import pytest

from bayesgrain.cmd.base import Command, ReportCommand
from bayesgrain.instance import Mode
from tests.conftest import TWO_STATE


class MockCommand(Command):
    async def execute(self) -> Any:
        pass

    async def save(self) -> None:
        pass


class MockReportCommand(ReportCommand):
    async def execute(self) -> None:
        self.load()
        self._payload = {"command": "mock", "value": 1}


@pytest.mark.parametrize("value", [0, 1, 255])
def test_exit_code_setter_valid(value: int) -> None:
    cmd = MockCommand(cli_args=None)
    cmd.exit_code = value
    assert cmd.exit_code == value


@pytest.mark.parametrize("value", [-1, 256])
def test_exit_code_setter_invalid(value: int) -> None:
    cmd = MockCommand(cli_args=None)
    with pytest.raises(ValueError):
        cmd.exit_code = value


def test_command_name() -> None:
    assert MockCommand(cli_args=None).name == "MockCommand"


@pytest.mark.asyncio
async def test_report_command_applies_mode_override() -> None:
    args = MagicMock()
    args.instance = TWO_STATE
    args.mode = "float"
    cmd = MockReportCommand(args)
    await cmd.execute()
    assert cmd.instance is not None
    assert cmd.instance.mode is Mode.FLOAT


@pytest.mark.asyncio
async def test_report_command_save(tmp_path: Path) -> None:
    args = MagicMock()
    args.instance = TWO_STATE
    args.mode = None
    args.output = tmp_path / "report.json"
    args.plot_data = tmp_path / "plot.csv"
    cmd = MockReportCommand(args)
    await cmd.execute()
    await cmd.save()

    assert args.output.read_text(encoding="utf-8") == (
        '{\n  "command": "mock",\n  "value": 1\n}\n'
    )
    plot = args.plot_data.read_text(encoding="utf-8").splitlines()
    assert plot[0] == "series,x,value"
    assert plot[1] == "prior,H,0.5"
    assert len(plot) == 9


@pytest.mark.asyncio
async def test_report_command_save_without_payload(tmp_path: Path) -> None:
    args = MagicMock()
    args.output = tmp_path / "report.json"
    cmd = MockReportCommand(args)
    await cmd.save()
    assert not args.output.exists()
