import pytest

from bayesgrain.cmd.partition import PartitionCommand
from bayesgrain.error import CommandMismatch
from bayesgrain.rationalizer import Consistent, partition_prover
from tests.conftest import EXPONENTIAL_PAIR, LAPLACE_LOCATIONS, cli_args


@pytest.mark.asyncio
async def test_partition_laplace_locations() -> None:
    cmd = PartitionCommand(
        cli_args("partition", LAPLACE_LOCATIONS, "--concurrency", "2")
    )
    await cmd.execute()
    assert isinstance(cmd.verdict, Consistent)
    assert cmd.payload is not None
    assert cmd.payload["command"] == "partition"
    assert cmd.payload["width"] == 1.0
    sides = {t["side"] for t in cmd.payload["tail_certificates"]}
    assert len(sides) == 2

    instance = cmd.instance
    assert instance is not None
    sequential = partition_prover(
        instance.parametric_prior(),
        instance.ensemble,  # type: ignore[arg-type]
        1.0,
    )
    assert cmd.verdict == sequential


@pytest.mark.asyncio
async def test_partition_needs_point_mass_family() -> None:
    cmd = PartitionCommand(cli_args("partition", EXPONENTIAL_PAIR))
    with pytest.raises(CommandMismatch):
        await cmd.execute()
