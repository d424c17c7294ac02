"""
Errors raised by the toolkit.

Every error carries the exit status the command line reports for it, so the
management command never has to map exception types by hand.
"""

from typing import TYPE_CHECKING


if TYPE_CHECKING:
    from typing import Any, Iterable, Optional


class CarlesonError(Exception):
    """Base class of all toolkit errors."""

    exit_status = 1
    kind = "error"

    def as_dict(self) -> "dict[str, Any]":
        return {"kind": self.kind, "message": str(self)}


class InvalidInput(CarlesonError, ValueError):
    """A parameter or configuration value is malformed or not finite."""

    exit_status = 2
    kind = "invalid-input"


class InvalidParameter(CarlesonError, ValueError):
    """A parameter is well-formed but outside its admissible range."""

    exit_status = 2
    kind = "invalid-parameter"


class DomainError(CarlesonError, ValueError):
    """A function was evaluated outside its domain."""

    exit_status = 2
    kind = "domain-error"


class RangeError(CarlesonError):
    """Numeric inversion could not bracket the requested value."""

    exit_status = 2
    kind = "range-error"

    def __init__(self, message: str, bracket: "tuple[float, float]") -> None:
        super().__init__(message)
        self.bracket = bracket

    def as_dict(self) -> "dict[str, Any]":
        data = super().as_dict()
        data["bracket"] = list(self.bracket)
        return data


class PreconditionViolation(CarlesonError):
    """A hypothesis an operation relies on does not hold."""

    exit_status = 2
    kind = "precondition-violation"

    def __init__(self, hypothesis: str, message: "Optional[str]" = None) -> None:
        super().__init__(message or f"hypothesis failed: {hypothesis}")
        self.hypothesis = hypothesis

    def as_dict(self) -> "dict[str, Any]":
        data = super().as_dict()
        data["hypothesis"] = self.hypothesis
        return data


class AccuracyFailure(CarlesonError):
    """A numeric procedure did not reach the requested accuracy."""

    exit_status = 3
    kind = "accuracy-failure"

    def __init__(
        self,
        message: str,
        partial_value: float = float("nan"),
        error_estimate: float = float("nan"),
    ) -> None:
        super().__init__(message)
        self.partial_value = partial_value
        self.error_estimate = error_estimate

    def as_dict(self) -> "dict[str, Any]":
        data = super().as_dict()
        data["partial_value"] = self.partial_value
        data["error_estimate"] = self.error_estimate
        return data


class ExpressionSyntaxError(CarlesonError, ValueError):
    """An arithmetic expression could not be parsed."""

    exit_status = 2
    kind = "syntax-error"

    def __init__(self, message: str, offset: int, expected: "Iterable[str]") -> None:
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        super().__init__(
            f"{message} at offset {offset} (expected one of: {', '.join(self.expected)})"
        )

    def as_dict(self) -> "dict[str, Any]":
        data = super().as_dict()
        data["offset"] = self.offset
        data["expected"] = list(self.expected)
        return data


class UnknownCommand(CarlesonError):
    """The requested command does not exist."""

    exit_status = 64
    kind = "usage-error"
