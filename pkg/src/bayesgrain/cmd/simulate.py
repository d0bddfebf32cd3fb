"""A module for simulating the posterior law induced by a subjective model."""

import json
import logging
from typing import Any

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.error import ParseError
from bayesgrain.oracle import PosteriorFrequencies, monte_carlo_posterior_law
from bayesgrain.rationalizer import (
    PartitionStrategy,
    SubjectiveModel,
    construct_subjective_model,
    singleton_partition,
    trivial_partition,
)
from bayesgrain.report import frequencies_payload, model_from_dict

LOGGER = logging.getLogger(__name__)

# Largest gap, in binomial standard deviations, reported as agreement.
AGREEMENT_SIGMAS = 4.0


class SimulateCommand(ReportCommand):
    """
    Command drawing signals from the true signal law, updating on each with a
    subjective model and tallying the posteriors reached. The model is read
    from ``--model`` or constructed from the instance.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.frequencies: PosteriorFrequencies | None = None

    def _model(self) -> SubjectiveModel:
        assert self.instance is not None  # nosec B101
        if self.cli_args.model is not None:
            try:
                with open(self.cli_args.model, encoding="utf-8") as model_file:
                    data = json.load(model_file)
            except (OSError, json.JSONDecodeError) as err:
                raise ParseError(str(self.cli_args.model), str(err)) from err
            if not isinstance(data, dict):
                raise ParseError(str(self.cli_args.model), "expected a JSON object")
            return model_from_dict(data, self.instance.mode)
        ensemble = self.instance.finite_ensemble()
        if PartitionStrategy(self.cli_args.partition) is PartitionStrategy.SINGLETON:
            cells = singleton_partition(len(ensemble))
        else:
            cells = trivial_partition(len(ensemble))
        return construct_subjective_model(
            self.instance.finite_prior(), ensemble, self.instance.true_signals, cells
        )

    async def execute(self) -> None:
        instance = self.load()
        ensemble = instance.finite_ensemble()
        model = self._model()
        self.frequencies = monte_carlo_posterior_law(
            model, instance.signal_law(), self.cli_args.draws, self.cli_args.seed
        )
        payload = frequencies_payload(
            self.frequencies,
            list(zip(ensemble.finite_posteriors(), ensemble.weights, strict=True)),
        )
        agreement = all(
            row["sigmas"] <= AGREEMENT_SIGMAS for row in payload["posteriors"]
        )
        LOGGER.info(
            "Simulated %s draws; %s with the observed weights",
            self.cli_args.draws,
            "agrees" if agreement else "disagrees",
        )
        self._payload = {
            "command": "simulate",
            "seed": self.cli_args.seed,
            "agreement": agreement,
            **payload,
        }
