"""
Sampled functions on the real line and on the upper half-plane.

Only moduli matter to the modular and norm computations, so half-plane
functions expose ``modulus(x, y)``; analytic witnesses add a complex
``value``. Functions declare an :class:`~carleson.quadrature.Envelope` or a
support so integrals over unbounded domains can be truncated with a bound.
"""

import math

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from scipy import integrate as scipy_integrate

from carleson.exceptions import (
    AccuracyFailure,
    DomainError,
    InvalidInput,
    InvalidParameter,
)
from carleson.quadrature import Box, Envelope


if TYPE_CHECKING:
    from typing import Any, Callable, Optional

    from carleson.expressions import Expression
    from carleson.typing import FloatArray


def line_quad(
    func: "Callable[[float], float]",
    a: float,
    b: float,
    breakpoints: "tuple[float, ...]" = (),
    rel_tol: float = 1e-11,
) -> float:
    """
    ``int_a^b func`` with QUADPACK, split at the breakpoints inside ``(a, b)``.

    Infinite endpoints are allowed. A QUADPACK warning whose error estimate
    exceeds the requested accuracy is raised as :class:`AccuracyFailure`.
    """
    inner = sorted(p for p in breakpoints if a < p < b)
    edges = [a, *inner, b]
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        value, error, *rest = scipy_integrate.quad(
            func, lo, hi, limit=500, epsabs=1e-14, epsrel=rel_tol, full_output=1
        )
        if not math.isfinite(value):
            raise AccuracyFailure(f"line integral on [{lo}, {hi}] is not finite", value, error)
        if len(rest) > 1 and error > max(1e-12, 1e3 * rel_tol * abs(value)):
            raise AccuracyFailure(
                f"line integral on [{lo}, {hi}] did not converge: {rest[1]}", value, error
            )
        total += value
    return float(total)


class LineFunction:
    """Function on the real line."""

    domain = "line"
    envelope: "Optional[Envelope]" = None

    def __call__(self, x: "FloatArray") -> "FloatArray":
        raise NotImplementedError

    @property
    def support(self) -> "Optional[tuple[float, float]]":
        return None

    @property
    def breakpoints(self) -> "tuple[float, ...]":
        return ()

    @property
    def is_zero(self) -> bool:
        return False

    def modulus(self, x: "FloatArray") -> "FloatArray":
        return np.abs(np.asarray(self(np.asarray(x, dtype=float)), dtype=float))

    def integral(self, a: float, b: float) -> float:
        """``int_a^b |f|``."""
        if b <= a:
            return 0.0
        support = self.support
        if support is not None:
            a, b = max(a, support[0]), min(b, support[1])
            if b <= a:
                return 0.0
        return line_quad(lambda t: float(self.modulus(np.asarray(t))), a, b, self.breakpoints)

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": type(self).__name__}


@dataclass(frozen=True)
class StepFunction(LineFunction):
    """Finite sum of constants on disjoint half-open intervals ``[a, b)``."""

    pieces: "tuple[tuple[float, float, float], ...]"

    def __post_init__(self) -> None:
        pieces = sorted((float(a), float(b), float(v)) for a, b, v in self.pieces)
        for a, b, v in pieces:
            if not all(math.isfinite(w) for w in (a, b, v)):
                raise InvalidInput("step function pieces must be finite")
            if b <= a:
                raise InvalidParameter(f"empty step piece [{a}, {b})")
        for (_, b0, _), (a1, _, _) in zip(pieces, pieces[1:]):
            if a1 < b0:
                raise InvalidParameter("step function pieces must be disjoint")
        object.__setattr__(self, "pieces", tuple(pieces))

    @classmethod
    def indicator(cls, a: float, b: float, value: float = 1.0) -> "StepFunction":
        return cls(((a, b, value),))

    def __call__(self, x: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        result = np.zeros_like(x)
        for a, b, v in self.pieces:
            result = np.where((a <= x) & (x < b), v, result)
        return result

    @property
    def support(self) -> "Optional[tuple[float, float]]":
        if not self.pieces:
            return None
        return self.pieces[0][0], self.pieces[-1][1]

    @property
    def breakpoints(self) -> "tuple[float, ...]":
        return tuple(sorted({p for a, b, _ in self.pieces for p in (a, b)}))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for _, _, v in self.pieces)

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        return None

    def integral(self, a: float, b: float) -> float:
        total = 0.0
        for lo, hi, v in self.pieces:
            overlap = min(b, hi) - max(a, lo)
            if overlap > 0:
                total += abs(v) * overlap
        return total

    def map_values(self, function: "Callable[[float], float]") -> "StepFunction":
        return StepFunction(tuple((a, b, function(v)) for a, b, v in self.pieces))

    def scaled(self, factor: float) -> "StepFunction":
        return self.map_values(lambda v: factor * v)

    @property
    def l1_norm(self) -> float:
        return sum(abs(v) * (b - a) for a, b, v in self.pieces)

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": "step", "pieces": [list(p) for p in self.pieces]}


@dataclass(frozen=True)
class ExpressionLineFunction(LineFunction):
    """Function of ``t`` given by a parsed arithmetic expression."""

    expression: "Expression" = field(compare=False)
    bounds: "Optional[tuple[float, float]]" = None
    envelope: "Optional[Envelope]" = None

    def __call__(self, x: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        values = np.asarray(self.expression.evaluate(t=x), dtype=float)
        values = np.broadcast_to(values, x.shape)
        if self.bounds is not None:
            values = np.where((self.bounds[0] <= x) & (x < self.bounds[1]), values, 0.0)
        return values

    @property
    def support(self) -> "Optional[tuple[float, float]]":
        return self.bounds

    @property
    def breakpoints(self) -> "tuple[float, ...]":
        return () if self.bounds is None else self.bounds

    def describe(self) -> "dict[str, Any]":
        return {
            "domain": self.domain,
            "kind": "expression",
            "expr": self.expression.source,
            "support": list(self.bounds) if self.bounds else None,
        }


@dataclass(frozen=True)
class MappedLineFunction(LineFunction):
    """``function(|base|)`` for a monotone ``function`` fixing 0."""

    base: LineFunction
    function: "Callable[[FloatArray], FloatArray]" = field(compare=False)

    def __call__(self, x: "FloatArray") -> "FloatArray":
        return np.asarray(self.function(self.base.modulus(x)), dtype=float)

    @property
    def support(self) -> "Optional[tuple[float, float]]":
        return self.base.support

    @property
    def breakpoints(self) -> "tuple[float, ...]":
        return self.base.breakpoints


class HalfPlaneFunction:
    """Function on the upper half-plane, known through its modulus."""

    domain = "half-plane"
    envelope: "Optional[Envelope]" = None
    support: "Optional[Box]" = None
    sup_bound: "Optional[float]" = None

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        raise NotImplementedError

    @property
    def center(self) -> float:
        return 0.0 if self.envelope is None else self.envelope.center

    @property
    def scale(self) -> float:
        return 1.0

    @property
    def is_zero(self) -> bool:
        return False

    def at(self, z: complex) -> float:
        if z.imag <= 0:
            raise DomainError(f"point {z} is not in the upper half-plane")
        return float(self.modulus(np.asarray(z.real), np.asarray(z.imag)))

    def scaled(self, factor: float) -> "HalfPlaneFunction":
        return ScaledFunction(self, factor)

    def restrict(self, y: float) -> "LineRestriction":
        return LineRestriction(self, y)

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": type(self).__name__}


@dataclass(frozen=True)
class ConstantFunction(HalfPlaneFunction):
    value: float

    @property
    def sup_bound(self) -> float:  # type: ignore[override]
        return abs(self.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        return Envelope(0.0, math.inf) if self.value == 0 else None

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        return np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, abs(self.value))

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": "constant", "value": self.value}


@dataclass(frozen=True)
class ExpressionHalfPlaneFunction(HalfPlaneFunction):
    """Modulus of an arithmetic expression in ``x`` and ``y``."""

    expression: "Expression" = field(compare=False)
    envelope: "Optional[Envelope]" = None
    support: "Optional[Box]" = None

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        values = np.abs(np.asarray(self.expression.evaluate(x=x, y=y), dtype=float))
        return np.broadcast_to(values, np.broadcast(x, y).shape)

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": "expression", "expr": self.expression.source}


@dataclass(frozen=True)
class ScaledFunction(HalfPlaneFunction):
    base: HalfPlaneFunction
    factor: float

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        return abs(self.factor) * self.base.modulus(x, y)

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        return None if self.base.envelope is None else self.base.envelope.scaled(self.factor)

    @property
    def support(self) -> "Optional[Box]":  # type: ignore[override]
        return self.base.support

    @property
    def sup_bound(self) -> "Optional[float]":  # type: ignore[override]
        bound = self.base.sup_bound
        return None if bound is None else abs(self.factor) * bound

    @property
    def scale(self) -> float:
        return self.base.scale

    @property
    def center(self) -> float:
        return self.base.center

    @property
    def is_zero(self) -> bool:
        return self.factor == 0 or self.base.is_zero

    def scaled(self, factor: float) -> "HalfPlaneFunction":
        return ScaledFunction(self.base, self.factor * factor)

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": "scaled", "factor": self.factor, "base": self.base.describe()}


@dataclass(frozen=True)
class PowerOf(HalfPlaneFunction):
    """``|base|**gamma``."""

    base: HalfPlaneFunction
    gamma: float

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        return np.power(self.base.modulus(x, y), self.gamma)

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        env = self.base.envelope
        if env is None:
            return None
        return Envelope(env.amplitude**self.gamma, env.decay * self.gamma, env.center, env.radius)

    @property
    def scale(self) -> float:
        return self.base.scale

    @property
    def center(self) -> float:
        return self.base.center


@dataclass(frozen=True)
class ProductFunction(HalfPlaneFunction):
    """Pointwise product; the envelope needs one bounded factor."""

    left: HalfPlaneFunction
    right: HalfPlaneFunction

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        return self.left.modulus(x, y) * self.right.modulus(x, y)

    @property
    def is_zero(self) -> bool:
        return self.left.is_zero or self.right.is_zero

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        if self.left.sup_bound is not None and self.right.envelope is not None:
            return self.right.envelope.scaled(self.left.sup_bound)
        if self.right.sup_bound is not None and self.left.envelope is not None:
            return self.left.envelope.scaled(self.right.sup_bound)
        return None

    @property
    def scale(self) -> float:
        return self.right.scale if self.left.sup_bound is not None else self.left.scale

    @property
    def center(self) -> float:
        return self.right.center if self.left.sup_bound is not None else self.left.center

    def describe(self) -> "dict[str, Any]":
        return {
            "domain": self.domain,
            "kind": "product",
            "left": self.left.describe(),
            "right": self.right.describe(),
        }


@dataclass(frozen=True)
class LineRestriction(LineFunction):
    """``x -> |F(x + iy)|`` for a half-plane function ``F``."""

    function: HalfPlaneFunction
    y: float

    def __post_init__(self) -> None:
        if not self.y > 0:
            raise InvalidParameter(f"restriction height must be positive, got {self.y}")

    def __call__(self, x: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        return self.function.modulus(x, np.full_like(x, self.y))

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        return self.function.envelope

    @property
    def is_zero(self) -> bool:
        return self.function.is_zero

    @property
    def breakpoints(self) -> "tuple[float, ...]":
        return (self.function.center,)

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": "restriction", "y": self.y, "function": self.function.describe()}
