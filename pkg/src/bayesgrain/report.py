"""
Report payloads, canonical JSON output and plot data.

Canonical JSON sorts object keys, writes floats with ``%.17g``, rationals as
``"num/den"`` strings and non-finite floats as the strings ``"inf"``,
``"-inf"`` and ``"nan"``, so that equal payloads are byte-identical.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import math
import sys
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import aiofiles
import numpy as np
import pydantic as pdc

from bayesgrain.alt_notions import Infeasible, NotionLadder, SYCertificate
from bayesgrain.diagnostic import EquivalenceReport
from bayesgrain.error import ValidationError
from bayesgrain.grain import (
    Arbitrary,
    CertificateReport,
    GrainCertificate,
    GrainResidual,
    NoGrain,
    TailVerdict,
)
from bayesgrain.instance import Mode, ProblemInstance, describe
from bayesgrain.measures import (
    FiniteDistribution,
    FiniteEnsemble,
    ParametricDistribution,
    PointMassFamily,
    average_posterior,
    density_curve,
    to_prob,
)
from bayesgrain.oracle import PosteriorFrequencies
from bayesgrain.rationalizer import (
    ConditionResult,
    Consistent,
    ConsistencyVerdict,
    Inconsistent,
    IntervalCell,
    ModelReport,
    NoPartitionFound,
    SubjectiveModel,
    SupportViolation,
    TailViolation,
    UnboundedDensityRatio,
    Undecided,
)

LOGGER = logging.getLogger(__name__)

PLOT_POINTS = 401
# Mass left outside the plotted range of a parametric law.
PLOT_TAIL_MASS = 1e-4


def fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _float_text(value: float) -> str:
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, ".17g")


def _emit(value: Any, indent: int, depth: int) -> str:
    pad = "\n" + " " * indent * (depth + 1) if indent else ""
    end = "\n" + " " * indent * depth if indent else ""
    sep = ": " if indent else ":"
    match value:
        case None:
            return "null"
        case bool():
            return "true" if value else "false"
        case enum.Enum():
            return _emit(value.value, indent, depth)
        case Fraction():
            return json.dumps(fraction_text(value))
        case int():
            return str(value)
        case float() | np.floating():
            return _float_text(float(value))
        case str():
            return json.dumps(value, ensure_ascii=False)
        case Mapping():
            if not value:
                return "{}"
            items = sorted((str(k), v) for k, v in value.items())
            body = ",".join(
                f"{pad}{json.dumps(k, ensure_ascii=False)}{sep}"
                f"{_emit(v, indent, depth + 1)}"
                for k, v in items
            )
            return "{" + body + end + "}"
        case list() | tuple():
            if not value:
                return "[]"
            body = ",".join(f"{pad}{_emit(v, indent, depth + 1)}" for v in value)
            return "[" + body + end + "]"
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def canonical_json(payload: Any, indent: int = 2) -> str:
    """
    Serialize a payload of dicts, lists, strings, numbers, Fractions and enums
    into canonical JSON, terminated by a newline.
    """
    return _emit(payload, indent, 0) + "\n"


def instance_payload(instance: ProblemInstance) -> dict[str, Any]:
    """
    Document of a problem instance in the loader's schema.
    """
    payload: dict[str, Any] = {
        "schema_version": instance.schema_version,
        "mode": instance.mode,
        "prior": describe(instance.prior),
    }
    if isinstance(instance.prior, FiniteDistribution):
        labels = list(instance.prior.states)
        payload["state_space"] = {"kind": "finite", "labels": labels}
    else:
        payload["state_space"] = {"kind": "real_line"}
    if isinstance(instance.ensemble, PointMassFamily):
        payload["ensemble"] = {
            "kind": "point_mass_family",
            "location_law": describe(instance.ensemble.location_law),
        }
    else:
        ensemble = instance.ensemble
        payload["ensemble"] = {
            "kind": "finite",
            "entries": [
                {"posterior": describe(p), "weight": w, "label": label}
                for p, w, label in zip(
                    ensemble.posteriors,
                    ensemble.weights,
                    ensemble.labels(),
                    strict=True,
                )
            ],
        }
        if instance.true_signals is not None:
            label_of = dict(zip(ensemble.posteriors, ensemble.labels(), strict=True))
            signals = instance.true_signals
            payload["true_signals"] = {
                "signals": [
                    {"label": s, "prob": p, "posterior": label_of[posterior]}
                    for s, p, posterior in zip(
                        signals.signals, signals.probs, signals.posteriors, strict=True
                    )
                ]
            }
    return payload


def serialize_instance(instance: ProblemInstance) -> str:
    return canonical_json(instance_payload(instance))


def model_payload(model: SubjectiveModel) -> dict[str, Any]:
    """
    Joint table of a subjective model with its marginals and kernels.
    """
    kernels = {}
    for signal in model.signals:
        kernel = model.kernel(signal)
        kernels[signal] = list(kernel.probs) if kernel is not None else None
    return {
        "states": list(model.states),
        "signals": list(model.signals),
        "joint": [list(row) for row in model.joint],
        "x_marginal": list(model.x_marginal().probs),
        "s_marginal": list(model.s_marginal().probs),
        "kernels": kernels,
    }


class _ModelDocument(pdc.BaseModel):
    states: list[str]
    signals: list[str]
    joint: list[list[int | float | str]]


def model_from_dict(
    data: Mapping[str, Any], mode: Mode = Mode.RATIONAL
) -> SubjectiveModel:
    """
    Read a subjective model from its payload. A ``rationalize`` report, which
    nests the model under ``"model"``, is accepted as well.

    Raises:
        ValidationError: when the table is malformed.
    """
    if isinstance(data.get("model"), Mapping):
        data = data["model"]
    try:
        document = _ModelDocument.model_validate(data)
    except pdc.ValidationError as err:
        first = err.errors()[0]
        path = ".".join(str(part) for part in ("model", *first["loc"]))
        raise ValidationError(path, str(first["msg"])) from err
    try:
        joint = tuple(
            tuple(to_prob(v, mode.exact) for v in row) for row in document.joint
        )
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise ValidationError("model.joint", str(err)) from err
    return SubjectiveModel(tuple(document.states), tuple(document.signals), joint)


def _residual_payload(residual: Any) -> Any:
    if isinstance(residual, Arbitrary):
        return str(residual)
    if isinstance(residual, GrainResidual):
        return {
            "kind": "grain_residual",
            "epsilon": residual.epsilon,
            "p": describe(residual.p),
            "q": describe(residual.q),
        }
    return describe(residual)


def certificate_payload(certificate: GrainCertificate) -> dict[str, Any]:
    return {
        "epsilon": certificate.epsilon,
        "c": certificate.c,
        "residual": _residual_payload(certificate.residual),
    }


def grain_payload(result: GrainCertificate | NoGrain) -> dict[str, Any]:
    if isinstance(result, GrainCertificate):
        return {"grain": True, "certificate": certificate_payload(result)}
    return {
        "grain": False,
        "reason": result.reason,
        "witness_state": result.witness_state,
        "radius": result.radius,
    }


def certificate_report_payload(report: CertificateReport) -> dict[str, Any]:
    return {
        "passed": report.passed,
        "identity": report.identity,
        "residual_valid": report.residual_valid,
        "messages": list(report.messages),
    }


def tail_verdict_payload(verdict: TailVerdict) -> dict[str, Any]:
    return {"relation": verdict.relation, "c": verdict.c, "witness": verdict.witness}


def _cell_payload(cell: Any) -> Any:
    if isinstance(cell, IntervalCell):
        return {"lower": cell.lower, "upper": cell.upper}
    return list(cell)


def witness_payload(witness: Any) -> dict[str, Any]:
    match witness:
        case SupportViolation(state=state):
            return {"kind": "SupportViolation", "state": state}
        case TailViolation(flagged=flagged):
            return {
                "kind": "TailViolation",
                "flagged": [
                    {"entry": index, **tail_verdict_payload(verdict)}
                    for index, verdict in flagged
                ],
            }
        case NoPartitionFound(search_log=log, cell=cell):
            return {
                "kind": "NoPartitionFound",
                "cell": _cell_payload(cell) if cell is not None else None,
                "search_log": list(log),
            }
        case UnboundedDensityRatio(radius=radius):
            return {"kind": "UnboundedDensityRatio", "radius": radius}
    raise TypeError(f"Unknown witness {witness!r}")


def verdict_payload(verdict: ConsistencyVerdict) -> dict[str, Any]:
    """
    Payload of a consistency verdict.
    """
    if isinstance(verdict, Consistent):
        return {
            "verdict": "Consistent",
            "model": (
                model_payload(verdict.model) if verdict.model is not None else None
            ),
            "partition": [_cell_payload(c) for c in verdict.partition],
            "certificates": [certificate_payload(c) for c in verdict.certificates],
            "tail_certificates": [
                {"side": t.side, "start": t.start, "reason": t.reason}
                for t in verdict.tail_certificates
            ],
        }
    if isinstance(verdict, Inconsistent):
        return {"verdict": "Inconsistent", "witness": witness_payload(verdict.witness)}
    assert isinstance(verdict, Undecided)  # nosec B101
    return {"verdict": "Undecided", "reason": verdict.reason}


def _condition_payload(result: ConditionResult) -> dict[str, Any]:
    return {"passed": result.passed, "messages": list(result.messages)}


def model_report_payload(report: ModelReport) -> dict[str, Any]:
    return {
        "passed": report.passed,
        "conditions": {
            "x_marginal": _condition_payload(report.x_marginal),
            "absolute_continuity": _condition_payload(report.absolute_continuity),
            "posteriors": _condition_payload(report.posteriors),
        },
    }


def ladder_payload(
    ladder: NotionLadder, reweighting: SYCertificate | Infeasible
) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "bayes_plausible": ladder.bayes_plausible,
        "shmaya_yariv": ladder.shmaya_yariv,
        "misspecified_bayesian": ladder.misspecified_bayesian,
    }
    if isinstance(reweighting, SYCertificate):
        payload["reweighting"] = {
            "lambdas": list(reweighting.lambdas),
            "delta": reweighting.delta,
        }
    else:
        payload["reweighting"] = {"lambdas": None, "delta": reweighting.delta}
    return payload


def equivalence_payload(report: EquivalenceReport) -> dict[str, Any]:
    return {
        "theta": report.theta,
        "centering": report.centering,
        "signals": report.signals,
        "mean_deviation": report.mean_deviation,
        "variance_deviation": report.variance_deviation,
    }


def frequencies_payload(
    frequencies: PosteriorFrequencies,
    expected: Sequence[tuple[FiniteDistribution, Any]],
) -> dict[str, Any]:
    """
    Empirical posterior law next to the observed weights, with each gap
    measured in binomial standard deviations.
    """
    rows = []
    for posterior, weight in expected:
        observed = frequencies.frequency_of(posterior)
        sigma = frequencies.binomial_sigma(float(weight))
        rows.append(
            {
                "posterior": list(posterior.probs),
                "expected": weight,
                "frequency": observed,
                "sigmas": abs(observed - float(weight)) / sigma if sigma > 0 else 0.0,
            }
        )
    return {"draws": frequencies.draws, "posteriors": rows}


@dataclass(frozen=True)
class PlotRow:
    series: str
    x: str | float
    value: float


def _plot_range(laws: Sequence[ParametricDistribution]) -> tuple[float, float]:
    bounds = [law.coverage_interval(PLOT_TAIL_MASS) for law in laws if not law.atomic]
    return min(lo for lo, _ in bounds), max(hi for _, hi in bounds)


def plot_rows(instance: ProblemInstance, points: int = PLOT_POINTS) -> list[PlotRow]:
    """
    Plot data for the prior, every realized posterior and the average
    posterior: probabilities per state for finite instances, densities on an
    even grid otherwise. Point-mass families contribute their location law.
    """
    rows: list[PlotRow] = []
    if isinstance(instance.prior, FiniteDistribution):
        ensemble = instance.finite_ensemble()
        average = average_posterior(ensemble)
        assert isinstance(average, FiniteDistribution)  # nosec B101
        named = [("prior", instance.prior)]
        named += [
            (f"posterior:{label}", p)
            for label, p in zip(
                ensemble.labels(), ensemble.finite_posteriors(), strict=True
            )
        ]
        named.append(("average", average))
        for name, dist in named:
            rows.extend(
                PlotRow(name, s, float(p))
                for s, p in zip(dist.states, dist.probs, strict=True)
            )
        return rows

    laws: list[tuple[str, ParametricDistribution]] = [("prior", instance.prior)]
    if isinstance(instance.ensemble, PointMassFamily):
        laws.append(("location_law", instance.ensemble.location_law))
    else:
        ensemble = instance.ensemble
        for label, posterior in zip(
            ensemble.labels(), ensemble.posteriors, strict=True
        ):
            if isinstance(posterior, ParametricDistribution):
                laws.append((f"posterior:{label}", posterior))
        average = average_posterior(ensemble)
        if isinstance(average, ParametricDistribution):
            laws.append(("average", average))
    laws = [(name, law) for name, law in laws if not law.atomic]
    if not laws:
        return rows
    lower, upper = _plot_range([law for _, law in laws])
    for name, law in laws:
        curve = density_curve(name, law, lower, upper, points)
        rows.extend(
            PlotRow(name, float(x), float(v))
            for x, v in zip(curve.xs, curve.values, strict=True)
        )
    return rows


async def write_text(path: str | Path | None, text: str) -> None:
    """
    Write text to a file, or to stdout when no path is given.
    """
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    async with aiofiles.open(path, "w", encoding="utf-8") as fp:
        await fp.write(text)
    LOGGER.info("Report written to %s", path)


async def write_plot_csv(path: str | Path, rows: Sequence[PlotRow]) -> None:
    """
    Write plot rows as CSV with header ``series,x,value``.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("series", "x", "value"))
    for row in rows:
        x = row.x if isinstance(row.x, str) else format(row.x, ".17g")
        writer.writerow((row.series, x, format(row.value, ".17g")))
    async with aiofiles.open(path, "w", encoding="utf-8") as fp:
        await fp.write(buffer.getvalue())
    LOGGER.info("Plot data written to %s", path)
