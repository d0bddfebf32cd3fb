import pytest

from bayesgrain.error import (
    BayesGrainError,
    CommandMismatch,
    HeterogeneousPriors,
    InputError,
    InvariantViolation,
    LadderViolation,
    NegativeTheta,
    NoGrainError,
    NonpositiveVariance,
    ParseError,
    StateMismatch,
    UnsupportedPair,
    ValidationError,
)


def test_parse_error_message() -> None:
    error = ParseError("instance.json", "Expecting value")
    assert str(error) == "Unable to parse instance.json: Expecting value"
    assert isinstance(error, InputError)


def test_validation_error_message() -> None:
    error = ValidationError("ensemble.weights", "weights sum to 1/2, not 1")
    assert error.field_path == "ensemble.weights"
    assert "ensemble.weights" in str(error)
    assert "1/2" in str(error)


def test_heterogeneous_priors() -> None:
    error = HeterogeneousPriors(["a3", "a7"])
    assert isinstance(error, ValidationError)
    assert error.field_path == "panel.period0"
    assert "a3, a7" in str(error)


def test_state_mismatch_message() -> None:
    error = StateMismatch(("H", "L"), ("A", "B"))
    assert "['H', 'L']" in str(error)
    assert "['A', 'B']" in str(error)


def test_numeric_parameter_errors() -> None:
    error = NonpositiveVariance("variance", 0)
    assert "variance must be strictly positive" in str(error)
    assert "-1" in str(NegativeTheta(-1))


def test_no_grain_error_message() -> None:
    error = NoGrainError((0, 2), "support violation at L")
    assert error.cell == (0, 2)
    assert "[0, 2]" in str(error)


def test_ladder_violation_message() -> None:
    error = LadderViolation(True, False, True)
    assert isinstance(error, InvariantViolation)
    assert "shmaya_yariv=False" in str(error)


@pytest.mark.parametrize(
    ["error", "input_error"],
    [
        pytest.param(CommandMismatch("finite only"), True, id="command-mismatch"),
        pytest.param(UnsupportedPair("q", "p"), False, id="unsupported-pair"),
        pytest.param(InvariantViolation("bug"), False, id="invariant"),
    ],
)
def test_error_hierarchy(error: BayesGrainError, input_error: bool) -> None:
    assert isinstance(error, BayesGrainError)
    assert isinstance(error, InputError) is input_error
