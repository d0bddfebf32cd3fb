from fractions import Fraction
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest

from bayesgrain.cmd.check import CheckCommand
from bayesgrain.error import UnsupportedPair
from bayesgrain.rationalizer import Consistent, Inconsistent, TailViolation, Undecided
from tests.conftest import EXPONENTIAL_PAIR, LAPLACE_LOCATIONS, TWO_STATE, cli_args


@pytest.mark.asyncio
async def test_check_two_state() -> None:
    cmd = CheckCommand(cli_args("check", TWO_STATE))
    await cmd.execute()
    assert isinstance(cmd.verdict, Consistent)
    assert cmd.payload is not None
    assert cmd.payload["command"] == "check"
    assert cmd.payload["verdict"] == "Consistent"
    assert cmd.payload["certificates"][0]["epsilon"] == Fraction(10, 19)


@pytest.mark.asyncio
async def test_check_singleton_partition() -> None:
    cmd = CheckCommand(cli_args("check", TWO_STATE, "--partition", "singleton"))
    await cmd.execute()
    assert cmd.payload is not None
    assert cmd.payload["partition"] == [[0], [1]]
    epsilons = [c["epsilon"] for c in cmd.payload["certificates"]]
    assert epsilons == [Fraction(5, 8), Fraction(1, 2)]


@pytest.mark.asyncio
async def test_check_heavier_tailed_posteriors() -> None:
    cmd = CheckCommand(cli_args("check", EXPONENTIAL_PAIR))
    await cmd.execute()
    assert isinstance(cmd.verdict, Inconsistent)
    assert isinstance(cmd.verdict.witness, TailViolation)
    assert cmd.payload is not None
    assert cmd.payload["witness"]["kind"] == "TailViolation"
    assert len(cmd.payload["witness"]["flagged"]) == 2


@pytest.mark.asyncio
async def test_check_point_mass_family() -> None:
    cmd = CheckCommand(cli_args("check", LAPLACE_LOCATIONS))
    await cmd.execute()
    assert isinstance(cmd.verdict, Consistent)
    assert cmd.verdict.model is None
    assert cmd.payload is not None
    assert cmd.payload["model"] is None


@pytest.mark.asyncio
@patch("bayesgrain.cmd.check.check_continuous")
async def test_check_unsupported_pair_is_undecided(mock_check: MagicMock) -> None:
    mock_check.side_effect = UnsupportedPair("q", "p")
    cmd = CheckCommand(cli_args("check", EXPONENTIAL_PAIR))
    await cmd.execute()
    assert isinstance(cmd.verdict, Undecided)
    assert cmd.payload == {
        "command": "check",
        "verdict": "Undecided",
        "reason": cmd.verdict.reason,
    }


@pytest.mark.asyncio
async def test_check_writes_report(tmp_path: Path) -> None:
    output = tmp_path / "verdict.json"
    cmd = CheckCommand(cli_args("check", TWO_STATE, "--output", output))
    await cmd.execute()
    await cmd.save()
    assert '"epsilon": "10/19"' in output.read_text(encoding="utf-8")
