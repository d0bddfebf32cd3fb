"""The main module of the bayesgrain application."""

import asyncio
import logging
import sys
from typing import Any

from bayesgrain import cli
from bayesgrain.cmd.base import Command
from bayesgrain.error import BayesGrainError, InvariantViolation
from bayesgrain.log import log_elapsed, setup_logging

LOGGER = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3


async def run(args: Any) -> None:
    """
    Run the command based on the provided arguments.

    Input errors end with exit code 2 and internal consistency failures with
    exit code 3. A command that ran reports its verdict in its output and
    exits with 0.

    Args:
        args: The command line arguments.

    """
    command: Command = args.func(args)
    try:
        with log_elapsed(command.name):
            await command.execute()
            await command.save()
    except InvariantViolation as err:
        LOGGER.error("Internal consistency failure: %s", err)
        command.exit_code = EXIT_INVARIANT_VIOLATION
    except BayesGrainError as err:
        LOGGER.error("%s", err)
        command.exit_code = EXIT_INPUT_ERROR
    LOGGER.info("Exiting with code %s.", command.exit_code)
    sys.exit(command.exit_code)


def main() -> None:
    """
    The main function of the bayesgrain application.
    """

    arg_parser = cli.setup_arg_parser()
    args = arg_parser.parse_args()
    setup_logging(args.verbose)
    LOGGER.debug("Arguments: %s", args)

    asyncio.run(run(args))


if __name__ == "__main__":  # pragma: no cover
    main()
