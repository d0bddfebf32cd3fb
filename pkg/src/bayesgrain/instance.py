"""
Problem instances: the observed prior, the observed distribution over
posteriors and, optionally, the true signal law, read from a JSON document.

Schema version 1::

    {
      "schema_version": "1",
      "mode": "rational" | "float",
      "state_space": {"kind": "finite", "labels": [...]} | {"kind": "real_line"},
      "prior": <distribution>,
      "ensemble": {"kind": "finite", "entries": [{"posterior": <distribution>,
                                                   "weight": <number>,
                                                   "label": <str, optional>}]}
                | {"kind": "point_mass_family", "location_law": <parametric>},
      "true_signals": {"signals": [{"label": ..., "prob": ...,
                                    "posterior": <entry label>}]}   (optional)
    }

A distribution is ``{"kind": "finite", "probs": [...]}`` or
``{"kind": "parametric", "family": ..., "params": {...}}``. Numbers may be JSON
numbers or ``"num/den"`` strings.
"""

from __future__ import annotations

import enum
import logging
import math
from collections.abc import Generator, Mapping
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Literal, TypeAlias

import pydantic as pdc

from bayesgrain.error import (
    CommandMismatch,
    InvalidParameterError,
    ParseError,
    ValidationError,
    ZeroMassCell,
)
from bayesgrain.measures import (
    EnsembleEntry,
    Exponential,
    FiniteDistribution,
    FiniteEnsemble,
    Laplace,
    Mixture,
    Normal,
    Orientation,
    ParametricDistribution,
    PointMass,
    PointMassFamily,
    PosteriorEnsemble,
    Prob,
    Truncated,
    Uniform,
    mixture,
    to_prob,
)
from bayesgrain.rationalizer import TrueSignalModel, check_signal_law

LOGGER = logging.getLogger(__name__)

SCHEMA_VERSION = "1"

Number: TypeAlias = int | float | str
Family: TypeAlias = Literal[
    "normal", "laplace", "exponential", "uniform", "point_mass", "truncated", "mixture"
]
_UNION_TAGS = frozenset({"finite", "parametric", "real_line", "point_mass_family"})


class Mode(str, enum.Enum):
    """
    Arithmetic used for finite-state computations.
    """

    RATIONAL = "rational"
    FLOAT = "float"

    @property
    def exact(self) -> bool:
        return self is Mode.RATIONAL


class _Document(pdc.BaseModel):
    model_config = pdc.ConfigDict(extra="forbid")


class FiniteDocument(_Document):
    kind: Literal["finite"]
    probs: list[Number]


class ParametricDocument(_Document):
    """
    A parametric law. Nested laws of ``truncated`` (``inner``) and
    ``mixture`` (``components[].law``) are parametric documents themselves.
    """

    kind: Literal["parametric"]
    family: Family
    params: dict[str, Any] = pdc.Field(default_factory=dict)


DistributionDocument: TypeAlias = Annotated[
    FiniteDocument | ParametricDocument, pdc.Field(discriminator="kind")
]


class FiniteStateSpace(_Document):
    kind: Literal["finite"]
    labels: list[str]

    @pdc.field_validator("labels", mode="after")
    @classmethod
    def labels_distinct(cls, value: list[str]) -> list[str]:
        if not value:
            raise ValueError("at least one state is required")
        if len(set(value)) != len(value):
            raise ValueError("state labels must be distinct")
        return value


class RealLine(_Document):
    kind: Literal["real_line"]


class EntryDocument(_Document):
    posterior: DistributionDocument
    weight: Number
    label: str | None = None


class FiniteEnsembleDocument(_Document):
    kind: Literal["finite"]
    entries: list[EntryDocument]


class PointMassFamilyDocument(_Document):
    kind: Literal["point_mass_family"]
    location_law: ParametricDocument


class SignalDocument(_Document):
    label: str
    prob: Number
    posterior: str = pdc.Field(description="Label of the ensemble entry it induces")


class TrueSignalsDocument(_Document):
    signals: list[SignalDocument]


class InstanceDocument(_Document):
    """
    Top-level problem instance document.
    """

    schema_version: Literal["1"] = "1"
    mode: Mode = Mode.RATIONAL
    state_space: Annotated[FiniteStateSpace | RealLine, pdc.Field(discriminator="kind")]
    prior: DistributionDocument
    ensemble: Annotated[
        FiniteEnsembleDocument | PointMassFamilyDocument,
        pdc.Field(discriminator="kind"),
    ]
    true_signals: TrueSignalsDocument | None = None


@dataclass(frozen=True)
class ProblemInstance:
    """
    Everything an observer of the population sees: the common prior, the
    distribution of realized posteriors and the true signal law.

    Attributes:
        prior: Common prior, finite or parametric.
        ensemble: Distribution over posteriors.
        mode: Arithmetic mode of finite-state computations.
        true_signals: True signal law; None means one signal per realized
            posterior, drawn with the posterior's weight.
    """

    prior: FiniteDistribution | ParametricDistribution
    ensemble: PosteriorEnsemble
    mode: Mode = Mode.RATIONAL
    true_signals: TrueSignalModel | None = None
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if isinstance(self.prior, FiniteDistribution):
            if not isinstance(self.ensemble, FiniteEnsemble):
                raise ValidationError(
                    "ensemble.kind", "a finite state space needs a finite ensemble"
                )
            for index, posterior in enumerate(self.ensemble.posteriors):
                if not isinstance(posterior, FiniteDistribution):
                    raise ValidationError(
                        f"ensemble.entries[{index}].posterior",
                        "posteriors over a finite state space must be finite",
                    )
                if posterior.states != self.prior.states:
                    raise ValidationError(
                        f"ensemble.entries[{index}].posterior.probs",
                        "posterior and prior use different states",
                    )
            if self.true_signals is not None:
                check_signal_law(self.ensemble, self.true_signals)
            return
        if isinstance(self.ensemble, FiniteEnsemble):
            for index, posterior in enumerate(self.ensemble.posteriors):
                if not isinstance(posterior, ParametricDistribution):
                    raise ValidationError(
                        f"ensemble.entries[{index}].posterior",
                        "posteriors on the real line must be parametric",
                    )
        if self.true_signals is not None:
            raise ValidationError(
                "true_signals", "a true signal law is only supported for finite states"
            )

    @property
    def finite(self) -> bool:
        return isinstance(self.prior, FiniteDistribution)

    def finite_prior(self) -> FiniteDistribution:
        if not isinstance(self.prior, FiniteDistribution):
            raise CommandMismatch("this command needs a finite state space")
        return self.prior

    def parametric_prior(self) -> ParametricDistribution:
        if not isinstance(self.prior, ParametricDistribution):
            raise CommandMismatch("this command needs a real-line state space")
        return self.prior

    def finite_ensemble(self) -> FiniteEnsemble:
        if not isinstance(self.ensemble, FiniteEnsemble):
            raise CommandMismatch("this command needs a finite ensemble of posteriors")
        return self.ensemble

    def signal_law(self) -> TrueSignalModel:
        """
        The true signal law, defaulting to the identity labeling.
        """
        if self.true_signals is not None:
            return self.true_signals
        return TrueSignalModel.from_ensemble(self.finite_ensemble())


@contextmanager
def _at(path: str) -> Generator[None, None, None]:
    """
    Report domain validation failures at a document field path.
    """
    try:
        yield
    except ValidationError as err:
        if err.field_path.startswith(path):
            raise
        raise ValidationError(f"{path}.{err.field_path}", err.reason) from err
    except (InvalidParameterError, ZeroMassCell) as err:
        raise ValidationError(path, str(err)) from err


def _real(params: Mapping[str, Any], name: str, path: str) -> float:
    if name not in params:
        raise ValidationError(f"{path}.{name}", "missing parameter")
    value = params[name]
    if isinstance(value, str) and value.strip().lstrip("+-") in {"inf", "infinity"}:
        return -math.inf if value.strip().startswith("-") else math.inf
    try:
        return float(to_prob(value, exact=False))
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise ValidationError(f"{path}.{name}", f"not a number: {value!r}") from err


def _bound(params: Mapping[str, Any], name: str, path: str, default: float) -> float:
    if params.get(name) is None:
        return default
    return _real(params, name, path)


def _nested(value: Any, path: str) -> ParametricDistribution:
    try:
        document = ParametricDocument.model_validate(value)
    except pdc.ValidationError as err:
        raise ValidationError(path, _first_error(err)[1]) from err
    return parametric_from_document(document, path)


def parametric_from_document(
    document: ParametricDocument, path: str = "distribution"
) -> ParametricDistribution:
    """
    Build a parametric law from its document.

    Raises:
        ValidationError: for missing or inadmissible parameters, reported at
            ``path.params.<name>``.
    """
    params = document.params
    where = f"{path}.params"
    with _at(where):
        match document.family:
            case "normal":
                return Normal(
                    _real(params, "mean", where), _real(params, "variance", where)
                )
            case "laplace":
                return Laplace(
                    _real(params, "location", where), _real(params, "scale", where)
                )
            case "exponential":
                orientation = params.get("orientation", "right")
                if orientation not in ("right", "mirrored"):
                    raise ValidationError(
                        f"{where}.orientation", "orientation must be right or mirrored"
                    )
                return Exponential(
                    _real(params, "rate", where), Orientation(orientation)
                )
            case "uniform":
                return Uniform(_real(params, "a", where), _real(params, "b", where))
            case "point_mass":
                return PointMass(_real(params, "location", where))
            case "truncated":
                return Truncated(
                    _nested(params.get("inner"), f"{where}.inner"),
                    _bound(params, "lower", where, -math.inf),
                    _bound(params, "upper", where, math.inf),
                )
            case "mixture":
                components = params.get("components")
                if not isinstance(components, list) or not components:
                    raise ValidationError(
                        f"{where}.components",
                        "a non-empty list of components is required",
                    )
                parts = []
                for i, component in enumerate(components):
                    at = f"{where}.components[{i}]"
                    if not isinstance(component, dict):
                        raise ValidationError(
                            at, "expected an object with weight and law"
                        )
                    weight = _real(component, "weight", at)
                    parts.append((weight, _nested(component.get("law"), f"{at}.law")))
                return mixture(parts)
    raise ValidationError(f"{path}.family", f"unknown family {document.family}")


def describe_parametric(dist: ParametricDistribution) -> dict[str, Any]:
    """
    Document of a parametric law, the inverse of ``parametric_from_document``.
    """
    params: dict[str, Any]
    match dist:
        case Normal(mean=mean, variance=variance):
            family, params = "normal", {"mean": mean, "variance": variance}
        case Laplace(location=location, scale=scale):
            family, params = "laplace", {"location": location, "scale": scale}
        case Exponential(rate=rate, orientation=orientation):
            family = "exponential"
            params = {"rate": rate, "orientation": orientation.value}
        case Uniform(a=a, b=b):
            family, params = "uniform", {"a": a, "b": b}
        case PointMass(location=location):
            family, params = "point_mass", {"location": location}
        case Truncated(inner=inner, lower=lower, upper=upper):
            family = "truncated"
            params = {
                "inner": describe_parametric(inner),
                "lower": lower,
                "upper": upper,
            }
        case Mixture(components=components):
            family = "mixture"
            params = {
                "components": [
                    {"weight": w, "law": describe_parametric(c)} for w, c in components
                ]
            }
        case _:
            raise TypeError(f"Cannot describe {dist!r}")
    return {"kind": "parametric", "family": family, "params": params}


def describe(dist: FiniteDistribution | ParametricDistribution) -> dict[str, Any]:
    if isinstance(dist, FiniteDistribution):
        return {"kind": "finite", "probs": list(dist.probs)}
    return describe_parametric(dist)


def _distribution(
    document: FiniteDocument | ParametricDocument,
    labels: list[str] | None,
    mode: Mode,
    path: str,
) -> FiniteDistribution | ParametricDistribution:
    if isinstance(document, ParametricDocument):
        if labels is not None:
            raise ValidationError(
                f"{path}.kind", "a finite state space needs finite distributions"
            )
        return parametric_from_document(document, path)
    if labels is None:
        raise ValidationError(
            f"{path}.kind", "the real line needs parametric distributions"
        )
    with _at(path):
        try:
            return FiniteDistribution.from_values(labels, document.probs, mode.exact)
        except (TypeError, ValueError, ZeroDivisionError) as err:
            raise ValidationError("probs", str(err)) from err


def _weight(value: Number, mode: Mode, path: str) -> Prob:
    try:
        return to_prob(value, mode.exact)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise ValidationError(path, f"not a number: {value!r}") from err


def instance_from_document(document: InstanceDocument) -> ProblemInstance:
    """
    Convert a schema-valid document into a validated problem instance.
    """
    mode = document.mode
    labels = (
        document.state_space.labels
        if isinstance(document.state_space, FiniteStateSpace)
        else None
    )
    prior = _distribution(document.prior, labels, mode, "prior")

    ensemble: PosteriorEnsemble
    if isinstance(document.ensemble, PointMassFamilyDocument):
        if labels is not None:
            raise ValidationError(
                "ensemble.kind", "point-mass families need a real-line state space"
            )
        ensemble = PointMassFamily(
            parametric_from_document(
                document.ensemble.location_law, "ensemble.location_law"
            )
        )
    else:
        entries = tuple(
            EnsembleEntry(
                _distribution(
                    entry.posterior, labels, mode, f"ensemble.entries[{i}].posterior"
                ),
                _weight(entry.weight, mode, f"ensemble.entries[{i}].weight"),
                entry.label,
            )
            for i, entry in enumerate(document.ensemble.entries)
        )
        ensemble = FiniteEnsemble(entries)

    true_signals = None
    if document.true_signals is not None:
        if not isinstance(ensemble, FiniteEnsemble):
            raise ValidationError(
                "true_signals", "a true signal law needs a finite ensemble"
            )
        by_label = dict(zip(ensemble.labels(), ensemble.posteriors, strict=True))
        posteriors = []
        for i, signal in enumerate(document.true_signals.signals):
            posterior = by_label.get(signal.posterior)
            if not isinstance(posterior, FiniteDistribution):
                raise ValidationError(
                    f"true_signals.signals[{i}].posterior",
                    f"no finite ensemble entry labeled {signal.posterior!r}",
                )
            posteriors.append(posterior)
        true_signals = TrueSignalModel(
            tuple(s.label for s in document.true_signals.signals),
            tuple(
                _weight(s.prob, mode, f"true_signals.signals[{i}].prob")
                for i, s in enumerate(document.true_signals.signals)
            ),
            tuple(posteriors),
        )
    return ProblemInstance(prior, ensemble, mode, true_signals, document.schema_version)


def _first_error(err: pdc.ValidationError) -> tuple[str, str]:
    first = err.errors()[0]
    parts: list[str] = []
    for item in first["loc"]:
        if isinstance(item, int):
            parts[-1:] = [f"{parts[-1]}[{item}]"] if parts else [f"[{item}]"]
        elif item not in _UNION_TAGS:
            parts.append(str(item))
    return ".".join(parts) or "<root>", str(first["msg"])


def parse_instance(
    text: str | bytes, source: str = "<input>", mode: Mode | None = None
) -> ProblemInstance:
    """
    Parse and validate a problem instance document.

    Args:
        text: The JSON document.
        source: Name of the document for error messages.
        mode: Arithmetic mode overriding the document's ``mode``.

    Raises:
        ParseError: when the text is not JSON.
        ValidationError: when the document breaks the schema or an invariant,
            with the path of the offending field.
    """
    try:
        document = InstanceDocument.model_validate_json(text)
    except pdc.ValidationError as err:
        if err.errors()[0]["type"] == "json_invalid":
            raise ParseError(source, str(err.errors()[0]["msg"])) from err
        path, reason = _first_error(err)
        raise ValidationError(path, reason) from err
    if mode is not None:
        document = document.model_copy(update={"mode": Mode(mode)})
    instance = instance_from_document(document)
    kind = "finite" if instance.finite else "real-line"
    LOGGER.debug("Loaded %s instance from %s", kind, source)
    return instance


def load_instance(path: str | Path, mode: Mode | None = None) -> ProblemInstance:
    """
    Load a problem instance from a JSON file.

    Raises:
        ParseError: when the file cannot be read or is not JSON.
        ValidationError: when the document breaks the schema or an invariant.
    """
    try:
        with open(path, encoding="utf-8") as instance_file:
            text = instance_file.read()
    except OSError as err:
        raise ParseError(str(path), err.strerror or str(err)) from err
    return parse_instance(text, str(path), mode)
