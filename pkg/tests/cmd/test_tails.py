import json
from pathlib import Path

import pytest

from bayesgrain.cmd.tails import TailsCommand
from bayesgrain.error import CommandMismatch
from bayesgrain.grain import TailRelation
from tests.conftest import EXPONENTIAL_PAIR, LAPLACE_LOCATIONS, TWO_STATE, cli_args


@pytest.mark.asyncio
async def test_tails_exponential_pair() -> None:
    cmd = TailsCommand(cli_args("tails", EXPONENTIAL_PAIR))
    await cmd.execute()
    assert cmd.payload is not None
    assert cmd.payload["inconsistent"] is True
    rows = cmd.payload["posteriors"]
    assert [row["label"] for row in rows] == ["right", "mirrored"]
    assert all(row["relation"] is TailRelation.Q_HEAVIER for row in rows)
    assert all(row["witness"] is not None for row in rows)


@pytest.mark.asyncio
async def test_tails_lighter_posteriors(tmp_path: Path) -> None:
    document = json.loads(EXPONENTIAL_PAIR.read_text(encoding="utf-8"))
    document["prior"] = {
        "kind": "parametric",
        "family": "laplace",
        "params": {"location": 0, "scale": 2},
    }
    instance = tmp_path / "laplace_prior.json"
    instance.write_text(json.dumps(document), encoding="utf-8")

    cmd = TailsCommand(cli_args("tails", instance))
    await cmd.execute()
    assert cmd.payload is not None
    assert cmd.payload["inconsistent"] is False


@pytest.mark.parametrize(
    "instance",
    [
        pytest.param(LAPLACE_LOCATIONS, id="point-mass-family"),
        pytest.param(TWO_STATE, id="finite-states"),
    ],
)
@pytest.mark.asyncio
async def test_tails_command_mismatch(instance: Path) -> None:
    cmd = TailsCommand(cli_args("tails", instance))
    with pytest.raises(CommandMismatch):
        await cmd.execute()
