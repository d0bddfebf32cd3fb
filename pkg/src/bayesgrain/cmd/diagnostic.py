"""A module for comparing diagnostic expectations with misspecified updating."""

import logging
from typing import Any

from bayesgrain.cmd.base import ReportCommand
from bayesgrain.diagnostic import (
    Centering,
    GaussianPrior,
    SignalNoise,
    diagnostic_grain_check,
    diagnostic_posterior,
    equivalence_report,
    kalman_gain,
    misspecified_model,
    misspecified_posterior,
    signal_grid,
)
from bayesgrain.error import InvalidParameterError
from bayesgrain.report import PlotRow, equivalence_payload, grain_payload

LOGGER = logging.getLogger(__name__)


class DiagnosticCommand(ReportCommand):
    """
    Command sweeping a signal grid in the Gaussian signal-extraction setting
    and reporting how far diagnostic posteriors are from the Bayesian
    posteriors of the matching misspecified noise model.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.prior: GaussianPrior | None = None
        self.noise: SignalNoise | None = None

    def _signals(self) -> list[float]:
        try:
            grid = signal_grid(
                self.cli_args.grid_min, self.cli_args.grid_max, self.cli_args.grid_step
            )
        except ValueError as err:
            raise InvalidParameterError(str(err)) from err
        return [float(s) for s in grid]

    async def execute(self) -> None:
        self.prior = GaussianPrior(
            self.cli_args.prior_mean, self.cli_args.prior_variance
        )
        self.noise = SignalNoise(self.cli_args.noise_variance)
        theta = self.cli_args.theta
        centering = Centering(self.cli_args.centering)
        model = misspecified_model(theta, self.noise, centering)
        report = equivalence_report(
            self.prior, self.noise, theta, centering, self._signals()
        )
        LOGGER.info(
            "Max deviations over %s signals: mean %.3g, variance %.3g",
            report.signals,
            report.mean_deviation,
            report.variance_deviation,
        )
        self._payload = {
            "command": "diagnostic",
            "kalman_gain": kalman_gain(self.prior.variance, self.noise.variance),
            "subjective_noise": {
                "mean_slope": model.noise_mean_slope,
                "variance": model.noise_variance,
                "centering": model.centering,
            },
            **equivalence_payload(report),
        }
        if self.cli_args.state is not None:
            result = diagnostic_grain_check(
                self.prior, self.noise, theta, self.cli_args.state
            )
            self._payload["grain_at_state"] = {
                "state": self.cli_args.state,
                **grain_payload(result),
            }

    def plot_rows(self) -> list[PlotRow]:
        """
        Posterior means of both updating rules across the signal grid.
        """
        if self.prior is None or self.noise is None:
            return []
        theta = self.cli_args.theta
        model = misspecified_model(
            theta, self.noise, Centering(self.cli_args.centering)
        )
        rows = []
        for s in self._signals():
            rows.append(
                PlotRow(
                    "diagnostic_mean",
                    s,
                    diagnostic_posterior(self.prior, self.noise, s, theta).mean,
                )
            )
            rows.append(
                PlotRow(
                    "misspecified_mean",
                    s,
                    misspecified_posterior(self.prior, model, s).mean,
                )
            )
        return rows
