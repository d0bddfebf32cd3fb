"""A module for checking a supplied subjective model against observed beliefs."""

import json
import logging
from typing import Any

import aiofiles

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.error import ParseError
from bayesgrain.rationalizer import ModelReport, verify_model
from bayesgrain.report import model_from_dict, model_report_payload

LOGGER = logging.getLogger(__name__)


class VerifyCommand(ReportCommand):
    """
    Command checking the three consistency conditions for a model read from
    ``--model``: the subjective state marginal is the prior, every true
    signal has subjective mass, and updating reproduces the observed
    posteriors with the observed weights.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.report: ModelReport | None = None

    async def execute(self) -> None:
        instance = self.load()
        prior = instance.finite_prior()
        ensemble = instance.finite_ensemble()
        try:
            async with aiofiles.open(self.cli_args.model, encoding="utf-8") as fp:
                data = json.loads(await fp.read())
        except OSError as err:
            raise ParseError(
                str(self.cli_args.model), err.strerror or str(err)
            ) from err
        except json.JSONDecodeError as err:
            raise ParseError(str(self.cli_args.model), str(err)) from err
        if not isinstance(data, dict):
            raise ParseError(str(self.cli_args.model), "expected a JSON object")
        model = model_from_dict(data, instance.mode)
        self.report = verify_model(model, prior, ensemble, instance.true_signals)
        LOGGER.info("Model %s verification", "passes" if self.report else "fails")
        self._payload = {"command": "verify", **model_report_payload(self.report)}
