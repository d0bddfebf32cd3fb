import json
from pathlib import Path
from unittest.mock import patch

import pytest

from bayesgrain.cmd.verify import VerifyCommand
from bayesgrain.error import ParseError, ValidationError
from tests.conftest import TWO_STATE, TWO_STATE_MODEL, cli_args


@pytest.mark.asyncio
async def test_verify_two_state_model() -> None:
    cmd = VerifyCommand(cli_args("verify", TWO_STATE, "--model", TWO_STATE_MODEL))
    await cmd.execute()
    assert cmd.report is not None
    assert cmd.report.passed
    assert cmd.payload is not None
    assert cmd.payload["command"] == "verify"
    assert all(c["passed"] for c in cmd.payload["conditions"].values())


@pytest.mark.asyncio
async def test_verify_rejects_wrong_prior(tmp_path: Path) -> None:
    data = json.loads(TWO_STATE_MODEL.read_text(encoding="utf-8"))
    # moves mass between states inside the reserved column
    data["joint"][0][2] = 0.125
    data["joint"][1][2] = 0.3125
    model = tmp_path / "model.json"
    model.write_text(json.dumps(data), encoding="utf-8")

    cmd = VerifyCommand(cli_args("verify", TWO_STATE, "--model", model))
    await cmd.execute()
    assert cmd.report is not None
    assert not cmd.report.passed
    assert cmd.payload is not None
    conditions = cmd.payload["conditions"]
    assert conditions["x_marginal"]["passed"] is False
    assert conditions["x_marginal"]["messages"]
    assert conditions["posteriors"]["passed"] is True


@pytest.mark.parametrize(
    "content",
    [
        pytest.param("{not json", id="not-json"),
        pytest.param("[1, 2]", id="not-an-object"),
    ],
)
@pytest.mark.asyncio
async def test_verify_unreadable_model(tmp_path: Path, content: str) -> None:
    model = tmp_path / "model.json"
    model.write_text(content, encoding="utf-8")
    cmd = VerifyCommand(cli_args("verify", TWO_STATE, "--model", model))
    with pytest.raises(ParseError):
        await cmd.execute()


@pytest.mark.asyncio
async def test_verify_missing_model(tmp_path: Path) -> None:
    cmd = VerifyCommand(
        cli_args("verify", TWO_STATE, "--model", tmp_path / "missing.json")
    )
    with pytest.raises(ParseError):
        await cmd.execute()


@pytest.mark.asyncio
async def test_verify_malformed_table(tmp_path: Path) -> None:
    model = tmp_path / "model.json"
    model.write_text(json.dumps({"states": ["H", "L"]}), encoding="utf-8")
    cmd = VerifyCommand(cli_args("verify", TWO_STATE, "--model", model))
    with pytest.raises(ValidationError):
        await cmd.execute()


@pytest.mark.asyncio
async def test_verify_reads_model_without_blocking_open() -> None:
    def blocking_open(*_: object, **__: object) -> None:
        raise AssertionError("model must be read through aiofiles")

    cmd = VerifyCommand(cli_args("verify", TWO_STATE, "--model", TWO_STATE_MODEL))
    with patch("bayesgrain.cmd.verify.open", blocking_open, create=True):
        await cmd.execute()
    assert cmd.report is not None
    assert cmd.report.passed
