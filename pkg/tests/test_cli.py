import argparse
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from bayesgrain.cli import (
    MAX_SEED,
    parse_concurrency,
    parse_draws,
    parse_positive,
    parse_seed,
    parse_states,
    parse_theta,
    parse_width,
    setup_arg_parser,
)
from bayesgrain.cmd.check import CheckCommand
from bayesgrain.cmd.diagnostic import DiagnosticCommand
from bayesgrain.oracle import DEFAULT_DRAWS, DEFAULT_SEED, MIN_DRAWS
from bayesgrain.rationalizer import DEFAULT_CELL_WIDTH, DEFAULT_CONCURRENCY


def test_setup_arg_parser() -> None:
    parser = setup_arg_parser()
    assert parser is not None
    assert parser.description is not None
    assert "misspecified Bayesian" in parser.description


@pytest.mark.parametrize(
    ["value", "expected"],
    [
        ("1", 1),
        ("0", argparse.ArgumentTypeError),
        ("-1", argparse.ArgumentTypeError),
        ("not_a_number", ValueError),
    ],
)
def test_parse_concurrency(value: str, expected: int | type) -> None:
    if isinstance(expected, type):
        with pytest.raises(expected):
            parse_concurrency(value)
    else:
        assert parse_concurrency(value) == expected


@pytest.mark.parametrize(
    ["parser", "value", "expected"],
    [
        pytest.param(parse_positive, "0.5", 0.5, id="positive"),
        pytest.param(parse_positive, "0", argparse.ArgumentTypeError, id="zero"),
        pytest.param(parse_positive, "inf", argparse.ArgumentTypeError, id="inf"),
        pytest.param(parse_positive, "nan", argparse.ArgumentTypeError, id="nan"),
        pytest.param(parse_width, "2", 2.0, id="width"),
        pytest.param(parse_width, "-1", argparse.ArgumentTypeError, id="width-neg"),
        pytest.param(parse_theta, "0", 0.0, id="theta-zero"),
        pytest.param(parse_theta, "-0.1", argparse.ArgumentTypeError, id="theta-neg"),
        pytest.param(parse_theta, "nan", argparse.ArgumentTypeError, id="theta-nan"),
        pytest.param(parse_seed, "0x5EED", 0x5EED, id="seed-hex"),
        pytest.param(parse_seed, str(MAX_SEED), MAX_SEED, id="seed-max"),
        pytest.param(
            parse_seed, str(MAX_SEED + 1), argparse.ArgumentTypeError, id="seed-big"
        ),
        pytest.param(parse_seed, "-1", argparse.ArgumentTypeError, id="seed-neg"),
        pytest.param(parse_draws, str(MIN_DRAWS), MIN_DRAWS, id="draws"),
        pytest.param(
            parse_draws, str(MIN_DRAWS - 1), argparse.ArgumentTypeError, id="draws-few"
        ),
        pytest.param(parse_states, "H, L", ["H", "L"], id="states"),
        pytest.param(parse_states, "H,H", argparse.ArgumentTypeError, id="states-dup"),
        pytest.param(parse_states, "H,", argparse.ArgumentTypeError, id="states-empty"),
    ],
)
def test_value_parsers(
    parser: Callable[[str], Any], value: str, expected: Any
) -> None:
    if isinstance(expected, type):
        with pytest.raises(expected):
            parser(value)
    else:
        assert parser(value) == expected


def test_check_defaults() -> None:
    args = setup_arg_parser().parse_args(["check", "instance.json"])
    assert args.func is CheckCommand
    assert args.instance == Path("instance.json")
    assert args.mode is None
    assert args.partition == "trivial"
    assert args.width == DEFAULT_CELL_WIDTH
    assert args.output is None
    assert args.plot_data is None


def test_partition_and_simulate_defaults() -> None:
    parser = setup_arg_parser()
    partition = parser.parse_args(["partition", "instance.json"])
    assert partition.concurrency == DEFAULT_CONCURRENCY
    simulate = parser.parse_args(["simulate", "instance.json"])
    assert simulate.seed == DEFAULT_SEED
    assert simulate.draws == DEFAULT_DRAWS
    assert simulate.model is None


def test_diagnostic_defaults() -> None:
    args = setup_arg_parser().parse_args(["diagnostic"])
    assert args.func is DiagnosticCommand
    assert (args.prior_mean, args.prior_variance, args.noise_variance) == (0, 1, 1)
    assert args.theta == 1.0
    assert args.centering == "centered"
    assert args.state is None


@pytest.mark.parametrize(
    ["command", "success"],
    [
        (["check"], False),
        (["check", "i.json", "--mode", "decimal"], False),
        (["check", "i.json", "--partition", "random"], False),
        (["check", "i.json", "--width", "0"], False),
        (["verify", "i.json"], False),
        (["verify", "i.json", "--model", "m.json"], True),
        (["rationalize", "i.json", "--partition", "singleton"], True),
        (["classify", "i.json", "--mode", "float"], True),
        (["tails", "i.json", "--output", "out.json"], True),
        (["partition", "i.json", "--concurrency", "0"], False),
        (["partition", "i.json", "--width", "0.5", "--concurrency", "4"], True),
        (["diagnostic", "--theta", "-1"], False),
        (["diagnostic", "--centering", "literal", "--state", "1.5"], True),
        (["simulate", "i.json", "--draws", "10"], False),
        (["simulate", "i.json", "--seed", "42", "--plot-data", "p.csv"], True),
        (["aggregate", "panel.csv", "--states", "H,L"], True),
        (["aggregate"], False),
        (["unknown"], False),
        (["--verbose", "check", "i.json"], True),
    ],
)
def test_command_lines(command: list[str], success: bool) -> None:
    parser = setup_arg_parser()
    if success:
        parser.parse_args(command)
    else:
        with pytest.raises(SystemExit):
            parser.parse_args(command)
