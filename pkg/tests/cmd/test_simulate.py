from pathlib import Path

import pytest

from bayesgrain.cmd.simulate import AGREEMENT_SIGMAS, SimulateCommand
from bayesgrain.error import CommandMismatch, ParseError
from bayesgrain.oracle import MIN_DRAWS
from tests.conftest import LAPLACE_LOCATIONS, TWO_STATE, TWO_STATE_MODEL, cli_args


@pytest.mark.asyncio
async def test_simulate_constructed_model() -> None:
    cmd = SimulateCommand(
        cli_args("simulate", TWO_STATE, "--draws", str(MIN_DRAWS), "--seed", "7")
    )
    await cmd.execute()
    payload = cmd.payload
    assert payload is not None
    assert payload["command"] == "simulate"
    assert payload["seed"] == 7
    assert payload["draws"] == MIN_DRAWS
    assert payload["agreement"] is True
    assert [row["expected"] for row in payload["posteriors"]] == [0.25, 0.75]
    assert all(row["sigmas"] <= AGREEMENT_SIGMAS for row in payload["posteriors"])


@pytest.mark.asyncio
async def test_simulate_is_reproducible() -> None:
    argv = ("simulate", TWO_STATE, "--draws", str(MIN_DRAWS), "--seed", "0x2a")
    first = SimulateCommand(cli_args(*argv))
    second = SimulateCommand(cli_args(*argv))
    await first.execute()
    await second.execute()
    assert first.frequencies == second.frequencies


@pytest.mark.asyncio
async def test_simulate_supplied_model() -> None:
    cmd = SimulateCommand(
        cli_args(
            "simulate",
            TWO_STATE,
            "--model",
            TWO_STATE_MODEL,
            "--draws",
            str(MIN_DRAWS),
        )
    )
    await cmd.execute()
    assert cmd.payload is not None
    assert cmd.payload["agreement"] is True


@pytest.mark.asyncio
async def test_simulate_singleton_partition() -> None:
    cmd = SimulateCommand(
        cli_args(
            "simulate",
            TWO_STATE,
            "--partition",
            "singleton",
            "--draws",
            str(MIN_DRAWS),
        )
    )
    await cmd.execute()
    assert cmd.payload is not None
    assert cmd.payload["agreement"] is True


@pytest.mark.asyncio
async def test_simulate_unreadable_model(tmp_path: Path) -> None:
    model = tmp_path / "model.json"
    model.write_text("[]", encoding="utf-8")
    cmd = SimulateCommand(cli_args("simulate", TWO_STATE, "--model", model))
    with pytest.raises(ParseError):
        await cmd.execute()


@pytest.mark.asyncio
async def test_simulate_needs_finite_ensemble() -> None:
    cmd = SimulateCommand(cli_args("simulate", LAPLACE_LOCATIONS))
    with pytest.raises(CommandMismatch):
        await cmd.execute()
