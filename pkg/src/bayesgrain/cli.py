"""bayesgrain Command Line Interface (CLI) Module"""

import argparse
import math
from pathlib import Path
from typing import Any

from bayesgrain.cmd import (
    aggregate,
    check,
    classify,
    diagnostic,
    partition,
    rationalize,
    simulate,
    tails,
    verify,
)
from bayesgrain.diagnostic import Centering
from bayesgrain.instance import Mode
from bayesgrain.oracle import DEFAULT_DRAWS, DEFAULT_SEED, MIN_DRAWS
from bayesgrain.rationalizer import (
    DEFAULT_CELL_WIDTH,
    DEFAULT_CONCURRENCY,
    PartitionStrategy,
)

MAX_SEED = 2**64 - 1


def setup_arg_parser() -> argparse.ArgumentParser:
    """
    Setup the argument parser for the CLI.

    Returns:
        argparse.ArgumentParser: Argument parser object configured with subparsers
        for the individual commands.
    """
    parser = argparse.ArgumentParser(
        description="Check beliefs for consistency with misspecified Bayesian updating"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    check_command_parser(subparsers)
    rationalize_command_parser(subparsers)
    verify_command_parser(subparsers)
    classify_command_parser(subparsers)
    tails_command_parser(subparsers)
    partition_command_parser(subparsers)
    diagnostic_command_parser(subparsers)
    simulate_command_parser(subparsers)
    aggregate_command_parser(subparsers)

    parser.add_argument("--verbose", action="store_true", help="Enable verbose output.")

    return parser


def _output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--output",
        type=Path,
        help="Path to the output file. If not provided, the report will be printed "
        "to stdout.",
    )
    parser.add_argument(
        "--plot-data",
        type=Path,
        help="Path of a CSV file receiving density or probability curves",
    )


def _instance_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("instance", type=Path, help="Path to a problem instance JSON")
    parser.add_argument(
        "--mode",
        choices=[m.value for m in Mode],
        help="Arithmetic mode, overriding the mode of the instance",
    )
    _output_arguments(parser)


def _partition_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--partition",
        choices=[s.value for s in PartitionStrategy],
        default=PartitionStrategy.TRIVIAL.value,
        help="Partition of the realized posteriors used to build the model",
    )


def _width_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--width",
        type=parse_width,
        default=DEFAULT_CELL_WIDTH,
        help="Width of the interval cells of posterior locations (real line)",
    )


def check_command_parser(subparsers: Any) -> None:
    """
    A parser for deciding consistency of an instance.
    """
    check_parser = subparsers.add_parser(
        "check", help="Decide whether the beliefs are misspecified-Bayesian"
    )
    _instance_arguments(check_parser)
    _partition_argument(check_parser)
    _width_argument(check_parser)
    check_parser.set_defaults(func=check.CheckCommand)


def rationalize_command_parser(subparsers: Any) -> None:
    """
    A parser for constructing a rationalizing subjective model.
    """
    rationalize_parser = subparsers.add_parser(
        "rationalize", help="Construct a subjective model explaining the beliefs"
    )
    _instance_arguments(rationalize_parser)
    _partition_argument(rationalize_parser)
    rationalize_parser.set_defaults(func=rationalize.RationalizeCommand)


def verify_command_parser(subparsers: Any) -> None:
    """
    A parser for verifying a supplied subjective model.
    """
    verify_parser = subparsers.add_parser(
        "verify", help="Check a subjective model against the observed beliefs"
    )
    _instance_arguments(verify_parser)
    verify_parser.add_argument(
        "--model",
        type=Path,
        required=True,
        help="Path to a model JSON, or to the report of the rationalize command",
    )
    verify_parser.set_defaults(func=verify.VerifyCommand)


def classify_command_parser(subparsers: Any) -> None:
    """
    A parser for the ladder of rationality notions.
    """
    classify_parser = subparsers.add_parser(
        "classify",
        help="Test Bayes plausibility, positive reweighting and misspecified "
        "Bayesianism",
    )
    _instance_arguments(classify_parser)
    classify_parser.set_defaults(func=classify.ClassifyCommand)


def tails_command_parser(subparsers: Any) -> None:
    """
    A parser for posterior tail comparison.
    """
    tails_parser = subparsers.add_parser(
        "tails", help="Compare the tails of each posterior with the prior's"
    )
    _instance_arguments(tails_parser)
    tails_parser.set_defaults(func=tails.TailsCommand)


def partition_command_parser(subparsers: Any) -> None:
    """
    A parser for the partition prover.
    """
    partition_parser = subparsers.add_parser(
        "partition",
        help="Certify the grain condition cell by cell for a point-mass family",
    )
    _instance_arguments(partition_parser)
    _width_argument(partition_parser)
    partition_parser.add_argument(
        "--concurrency",
        type=parse_concurrency,
        default=DEFAULT_CONCURRENCY,
        help="concurrency limit for cell certification (non-zero integer)",
    )
    partition_parser.set_defaults(func=partition.PartitionCommand)


def diagnostic_command_parser(subparsers: Any) -> None:
    """
    A parser for the diagnostic expectations comparison.
    """
    diagnostic_parser = subparsers.add_parser(
        "diagnostic",
        help="Compare diagnostic expectations with misspecified Bayesian updating",
    )
    diagnostic_parser.add_argument("--prior-mean", type=float, default=0.0)
    diagnostic_parser.add_argument(
        "--prior-variance", type=parse_positive, default=1.0
    )
    diagnostic_parser.add_argument(
        "--noise-variance", type=parse_positive, default=1.0
    )
    diagnostic_parser.add_argument(
        "--theta",
        type=parse_theta,
        default=1.0,
        help="Diagnosticity: the overreaction of the posterior mean (>= 0)",
    )
    diagnostic_parser.add_argument(
        "--centering",
        choices=[c.value for c in Centering],
        default=Centering.CENTERED.value,
        help="Anchor of the subjective noise mean",
    )
    diagnostic_parser.add_argument("--grid-min", type=float, default=-5.0)
    diagnostic_parser.add_argument("--grid-max", type=float, default=5.0)
    diagnostic_parser.add_argument("--grid-step", type=parse_positive, default=0.1)
    diagnostic_parser.add_argument(
        "--state",
        type=float,
        help="True state at which to check the grain of the average diagnostic "
        "posterior",
    )
    _output_arguments(diagnostic_parser)
    diagnostic_parser.set_defaults(func=diagnostic.DiagnosticCommand)


def simulate_command_parser(subparsers: Any) -> None:
    """
    A parser for the Monte Carlo posterior law.
    """
    simulate_parser = subparsers.add_parser(
        "simulate", help="Sample the posterior law induced by a subjective model"
    )
    _instance_arguments(simulate_parser)
    _partition_argument(simulate_parser)
    simulate_parser.add_argument(
        "--model",
        type=Path,
        help="Path to a model JSON; by default the model is constructed",
    )
    simulate_parser.add_argument(
        "--seed", type=parse_seed, default=DEFAULT_SEED, help="Random seed (u64)"
    )
    simulate_parser.add_argument(
        "--draws",
        type=parse_draws,
        default=DEFAULT_DRAWS,
        help=f"Number of sampled signals (at least {MIN_DRAWS})",
    )
    simulate_parser.set_defaults(func=simulate.SimulateCommand)


def aggregate_command_parser(subparsers: Any) -> None:
    """
    A parser for turning a belief panel into a problem instance.
    """
    aggregate_parser = subparsers.add_parser(
        "aggregate", help="Build a problem instance from a belief panel CSV"
    )
    aggregate_parser.add_argument(
        "panel", type=Path, help="CSV with header agent,period,belief"
    )
    aggregate_parser.add_argument(
        "--states",
        type=parse_states,
        help="Comma-separated state labels of the belief vectors",
    )
    aggregate_parser.add_argument(
        "--mode",
        choices=[m.value for m in Mode],
        default=Mode.RATIONAL.value,
        help="Arithmetic mode of the emitted instance",
    )
    _output_arguments(aggregate_parser)
    aggregate_parser.set_defaults(func=aggregate.AggregateCommand)


def parse_concurrency(val: str) -> int:
    """Parse and validate concurrency limit from command line argument.

    Args:
        val: String value from command line argument.

    Returns:
        Validated integer concurrency limit.

    Raises:
        argparse.ArgumentTypeError: If value is not a positive integer.
    """
    num = int(val)
    if num < 1:
        raise argparse.ArgumentTypeError(
            "Concurrency limit must be a non-zero integer."
        )
    return num


def parse_positive(val: str) -> float:
    """
    Parse a finite, strictly positive number.
    """
    num = float(val)
    if not num > 0 or not math.isfinite(num):
        raise argparse.ArgumentTypeError(f"Expected a positive number, got {val}.")
    return num


def parse_width(val: str) -> float:
    """
    Parse the cell width of the partition prover.
    """
    return parse_positive(val)


def parse_theta(val: str) -> float:
    """
    Parse the diagnosticity parameter, a finite nonnegative number.
    """
    num = float(val)
    if not num >= 0 or not math.isfinite(num):
        raise argparse.ArgumentTypeError(f"Theta must be nonnegative, got {val}.")
    return num


def parse_seed(val: str) -> int:
    """
    Parse a seed, an unsigned 64-bit integer in decimal or 0x-hex notation.
    """
    num = int(val, 0)
    if not 0 <= num <= MAX_SEED:
        raise argparse.ArgumentTypeError("Seed must be an unsigned 64-bit integer.")
    return num


def parse_draws(val: str) -> int:
    """
    Parse the number of Monte Carlo draws.
    """
    num = int(val)
    if num < MIN_DRAWS:
        raise argparse.ArgumentTypeError(f"At least {MIN_DRAWS} draws are required.")
    return num


def parse_states(val: str) -> list[str]:
    """
    Parse a comma-separated list of distinct state labels.
    """
    states = [s.strip() for s in val.split(",")]
    if not all(states) or len(set(states)) != len(states):
        raise argparse.ArgumentTypeError("States must be distinct non-empty labels.")
    return states
