"""
This module contains errors raised while checking and rationalizing beliefs.
"""

from collections.abc import Sequence


class BayesGrainError(Exception):
    """
    Exception that can be raised during consistency checking and model
    construction.
    """

    def __init__(self, *args: object, **kwargs: object) -> None:
        super().__init__(*args, **kwargs)


class InputError(BayesGrainError):
    """
    The input is malformed or does not fit the requested operation. The CLI
    exits with code 2 on these.
    """


class ParseError(InputError):
    """
    An input document could not be parsed.
    """

    def __init__(self, source: str, reason: str) -> None:
        self.source = source
        self.reason = reason
        super().__init__(f"Unable to parse {source}: {reason}")


class ValidationError(InputError):
    """
    An input document parsed, but breaks an invariant of the data model.
    """

    def __init__(self, field_path: str, reason: str) -> None:
        self.field_path = field_path
        self.reason = reason
        super().__init__(f"Invalid value at {field_path}: {reason}")


class HeterogeneousPriors(ValidationError):
    """
    Agents in a belief panel do not share the same period-0 belief.
    """

    def __init__(self, agents: Sequence[str]) -> None:
        self.agents = list(agents)
        super().__init__(
            "panel.period0",
            "agents do not share a common prior; offending agents: "
            + ", ".join(self.agents),
        )


class StateMismatch(InputError):
    """
    Two finite distributions are defined over different state lists.
    """

    def __init__(
        self, expected: Sequence[str], actual: Sequence[str], *args: object
    ) -> None:
        self.expected = tuple(expected)
        self.actual = tuple(actual)
        message = (
            "State lists differ. "
            f"Expected states: {list(self.expected)}, "
            f"actual states: {list(self.actual)}"
        )
        super().__init__(message, *args)


class MixedRepresentation(InputError):
    """
    Finite and parametric distributions were mixed where a single
    representation is required.
    """


class ZeroMassCell(InputError):
    """
    A partition cell or interval carries no probability mass.
    """


class HypothesisViolated(InputError):
    """
    The input does not satisfy the hypothesis the requested test relies on.
    """


class CommandMismatch(InputError):
    """
    The command cannot be applied to the representation of the instance.
    """


class SearchSpaceTooLarge(InputError):
    """
    The exhaustive oracle was asked for a search beyond its desk-scale limits.
    """


class InvalidParameterError(InputError):
    """
    A numeric parameter is outside its admissible range.
    """


class NonpositiveVariance(InvalidParameterError):
    """
    A variance parameter is zero or negative.
    """

    def __init__(self, name: str, value: float) -> None:
        self.name = name
        self.value = value
        super().__init__(f"{name} must be strictly positive, got {value}")


class NegativeTheta(InvalidParameterError):
    """
    The diagnosticity parameter is negative.
    """

    def __init__(self, theta: float) -> None:
        self.theta = theta
        super().__init__(f"theta must be nonnegative, got {theta}")


class UnsupportedPair(BayesGrainError):
    """
    A pair of laws lies outside the implemented family lattice.
    """

    def __init__(self, q: object, p: object) -> None:
        self.q = q
        self.p = p
        super().__init__(f"Density ratio of {q!r} against {p!r} is not supported")


class NoGrainError(BayesGrainError):
    """
    A partition cell has no grain certificate against the prior.
    """

    def __init__(self, cell: Sequence[int], reason: str) -> None:
        self.cell = tuple(cell)
        self.reason = reason
        super().__init__(
            f"Prior contains no grain of the average posterior over cell "
            f"{list(self.cell)}: {reason}"
        )


class InvariantViolation(BayesGrainError):
    """
    An internal consistency check failed. This indicates a bug and is never a
    valid result. The CLI exits with code 3 on these.
    """


class LadderViolation(InvariantViolation):
    """
    The implication chain between the notions of Bayesianism does not hold.
    """

    def __init__(
        self, bayes_plausible: bool, shmaya_yariv: bool, misspecified: bool
    ) -> None:
        super().__init__(
            "Notion ladder violated: "
            f"bayes_plausible={bayes_plausible}, shmaya_yariv={shmaya_yariv}, "
            f"misspecified_bayesian={misspecified}"
        )
