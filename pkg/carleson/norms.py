"""
Modulars and Luxemburg norms.

Line functions are integrated against Lebesgue measure on the real line with
QUADPACK (step functions in closed form); half-plane functions against a
:class:`~carleson.quadrature.Measure` with the adaptive rule. A modular is
infinite when the declared envelope cannot make ``phi(|f|)`` integrable; a
function without envelope or support on an unbounded domain is not in the
space.
"""

import logging
import math

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from carleson.exceptions import AccuracyFailure, InvalidParameter
from carleson.functions import HalfPlaneFunction, LineFunction, StepFunction, line_quad
from carleson.growth import estimate_indices
from carleson.quadrature import (
    Atomic,
    Envelope,
    Integrand,
    LebesgueAlpha,
    Measure,
    QuadratureConfig,
    tail_bound,
)


if TYPE_CHECKING:
    from typing import Any, Callable, Optional, Sequence, Union

    from carleson.growth import GrowthFunction, GrowthIndices
    from carleson.quadrature import QuadratureResult, QuadratureRule

    SampledFunction = Union[LineFunction, HalfPlaneFunction]


logger = logging.getLogger(__name__)

_MAX_EXPANSIONS = 200


@dataclass(frozen=True)
class LuxemburgResult:
    norm: float
    modular_at_norm: float
    iterations: int
    bracket: "tuple[float, float]"
    in_space: bool = True

    def as_dict(self) -> "dict[str, Any]":
        return {
            "norm": self.norm if self.in_space else None,
            "modular_at_norm": self.modular_at_norm if self.in_space else None,
            "iterations": self.iterations,
            "bracket": list(self.bracket) if self.in_space else None,
            "in_space": self.in_space,
        }


NOT_IN_SPACE = LuxemburgResult(math.inf, math.inf, 0, (math.inf, math.inf), in_space=False)
ZERO = LuxemburgResult(0.0, 0.0, 0, (0.0, 0.0))


def modular_envelope(
    envelope: Envelope, phi: "GrowthFunction", indices: "GrowthIndices", scale: float = 1.0
) -> Envelope:
    """
    Envelope of ``phi(scale * |f|)`` from the envelope of ``f``.

    Where ``scale * |f| <= 1`` the lower index gives
    ``phi(u) <= phi(1) * u**a``, so the decay multiplies by ``a``.
    """
    amplitude = envelope.amplitude * scale
    if amplitude == 0:
        return Envelope(0.0, envelope.decay, envelope.center, envelope.radius)
    radius = max(envelope.radius, amplitude ** (1.0 / envelope.decay))
    a = indices.lower
    return Envelope(
        float(phi.value(1.0)) * amplitude**a,
        envelope.decay * a,
        envelope.center,
        radius,
    )


def _line_integrable(f: LineFunction, indices: "GrowthIndices") -> bool:
    if f.support is not None:
        return True
    return f.envelope is not None and f.envelope.decay * indices.lower > 1


def _plane_integrable(
    f: HalfPlaneFunction, measure: Measure, indices: "GrowthIndices"
) -> bool:
    if f.support is not None or isinstance(measure, Atomic):
        return True
    if f.envelope is None:
        return False
    bounds = measure.weight_bounds()
    if bounds is None:
        return True
    decay = f.envelope.decay * indices.lower
    return tail_bound(Envelope(1.0, decay), 1.0, bounds) < math.inf


def _line_modular(
    f: LineFunction, phi: "GrowthFunction", scale: float = 1.0
) -> float:
    if isinstance(f, StepFunction):
        return float(
            sum(float(phi.value(scale * abs(v))) * (b - a) for a, b, v in f.pieces)
        )
    support = f.support
    a, b = support if support is not None else (-math.inf, math.inf)
    points = list(f.breakpoints)
    if f.envelope is not None and support is None:
        points.append(f.envelope.center)

    def integrand(t: float) -> float:
        return float(phi.value(scale * float(f.modulus(np.asarray(t)))))

    return line_quad(integrand, a, b, tuple(points), rel_tol=1e-10)


def _plane_integrand(
    f: HalfPlaneFunction,
    phi: "GrowthFunction",
    indices: "GrowthIndices",
    scale: float = 1.0,
) -> Integrand:
    return Integrand(
        func=lambda x, y: phi.value(scale * f.modulus(x, y)),
        center=f.center,
        scale=f.scale,
        envelope=(
            None
            if f.envelope is None
            else modular_envelope(f.envelope, phi, indices, scale)
        ),
        support=f.support,
    )


def modular(
    f: "SampledFunction",
    phi: "GrowthFunction",
    measure: "Optional[Measure]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    scale: float = 1.0,
) -> float:
    """``int phi(scale * |f|) dmu``; infinite when the envelope test fails."""
    if f.is_zero or scale == 0:
        return 0.0
    indices = estimate_indices(phi)
    if isinstance(f, LineFunction):
        if measure is not None:
            raise InvalidParameter("line functions are integrated against Lebesgue measure")
        if not _line_integrable(f, indices):
            return math.inf
        return _line_modular(f, phi, scale)
    result = modular_integral(f, phi, measure, cfg, scale)
    return math.inf if result is None else result.value


def modular_integral(
    f: HalfPlaneFunction,
    phi: "GrowthFunction",
    measure: "Optional[Measure]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    scale: float = 1.0,
) -> "Optional[QuadratureResult]":
    """Quadrature result of a half-plane modular, with its rule; None when infinite."""
    indices = estimate_indices(phi)
    measure = measure or LebesgueAlpha(0.0)
    if not _plane_integrable(f, measure, indices):
        return None
    return measure.integrate(_plane_integrand(f, phi, indices, scale), cfg)


def _bisect(
    evaluate: "Callable[[float], float]", lo: float, hi: float, tol: float
) -> "tuple[float, float, int]":
    """Shrink ``[lo, hi]`` keeping ``evaluate(lo) > 1 >= evaluate(hi)``."""
    iterations = 0
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if evaluate(mid) <= 1:
            hi = mid
        else:
            lo = mid
        iterations += 1
    return lo, hi, iterations


def _bracket(
    evaluate: "Callable[[float], float]", start: float
) -> "tuple[float, float]":
    hi = start
    for _ in range(_MAX_EXPANSIONS):
        if evaluate(hi) <= 1:
            break
        hi *= 2
    else:
        raise AccuracyFailure("could not find lambda with modular at most 1", hi)
    lo = hi / 2
    for _ in range(_MAX_EXPANSIONS):
        if evaluate(lo) > 1:
            return lo, hi
        hi, lo = lo, lo / 2
    raise AccuracyFailure("modular stays at most 1 for every tested lambda", lo)


def luxemburg_norm(
    f: "SampledFunction",
    phi: "GrowthFunction",
    measure: "Optional[Measure]" = None,
    tol: float = 1e-10,
    cfg: "Optional[QuadratureConfig]" = None,
) -> LuxemburgResult:
    """
    ``inf {lambda > 0 : modular(f / lambda) <= 1}`` by bisection.

    Half-plane modulars are evaluated on a rule adapted at ``lambda = 1``;
    once bisection settles, the rule is re-adapted at the norm and the final
    bracket is bisected again on the new rule.
    """
    if tol <= 0:
        raise InvalidParameter("tolerance must be positive")
    if f.is_zero:
        return ZERO
    indices = estimate_indices(phi)
    if isinstance(f, LineFunction):
        if measure is not None:
            raise InvalidParameter("line functions are integrated against Lebesgue measure")
        if not _line_integrable(f, indices):
            return NOT_IN_SPACE

        def evaluate(lam: float) -> float:
            return _line_modular(f, phi, 1.0 / lam)

        return _luxemburg(evaluate, evaluate, indices, tol)

    measure = measure or LebesgueAlpha(0.0)
    if not _plane_integrable(f, measure, indices):
        return NOT_IN_SPACE

    def rule_at(lam: float) -> "QuadratureRule":
        result = measure.integrate(_plane_integrand(f, phi, indices, 1.0 / lam), cfg)
        assert result.rule is not None
        return result.rule

    coarse = rule_at(1.0)

    def on_rule(rule: "QuadratureRule") -> "Callable[[float], float]":
        return lambda lam: rule.apply(lambda x, y: phi.value(f.modulus(x, y) / lam))

    first = _luxemburg(on_rule(coarse), on_rule(coarse), indices, 1e-6)
    fine = on_rule(rule_at(first.norm))
    lo, hi = first.norm * (1 - 1e-3), first.norm * (1 + 1e-3)
    while fine(hi) > 1:
        hi *= 1.01
    while fine(lo) <= 1:
        lo *= 0.99
    lo, hi, iterations = _bisect(fine, lo, hi, tol)
    return LuxemburgResult(hi, fine(hi), first.iterations + iterations, (lo, hi))


def _luxemburg(
    evaluate: "Callable[[float], float]",
    initial: "Callable[[float], float]",
    indices: "GrowthIndices",
    tol: float,
) -> LuxemburgResult:
    m1 = initial(1.0)
    if m1 == 0:
        return ZERO
    if not math.isfinite(m1):
        return NOT_IN_SPACE
    lo, hi = _bracket(evaluate, m1 ** (1.0 / indices.lower) + 1.0)
    lo, hi, iterations = _bisect(evaluate, lo, hi, tol)
    logger.debug("luxemburg bracket [%.12g, %.12g] after %d iterations", lo, hi, iterations)
    return LuxemburgResult(hi, evaluate(hi), iterations, (lo, hi))


@dataclass(frozen=True)
class NormModularCheck:
    norm: float
    modular: float
    modular_constant: float
    norm_constant: float
    passed: bool

    def as_dict(self) -> "dict[str, Any]":
        return {
            "norm": self.norm,
            "modular": self.modular,
            "modular_constant": self.modular_constant,
            "norm_constant": self.norm_constant,
            "passed": self.passed,
        }


def norm_modular_bounds_check(
    f: "SampledFunction",
    phi: "GrowthFunction",
    measure: "Optional[Measure]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    slack: float = 1e-6,
) -> NormModularCheck:
    """
    Check ``modular <= C max(N**a, N**b)`` and ``N <= C max(M**(1/a), M**(1/b))``.

    The reported constants are the empirical ones, floored at 1.
    """
    if f.is_zero:
        return NormModularCheck(0.0, 0.0, 1.0, 1.0, True)
    indices = estimate_indices(phi)
    a, b = indices.lower, indices.upper
    norm = luxemburg_norm(f, phi, measure, cfg=cfg)
    value = modular(f, phi, measure, cfg)
    if not norm.in_space or not math.isfinite(value):
        return NormModularCheck(norm.norm, value, math.inf, math.inf, False)
    n, m = norm.norm, value
    c_modular = m / max(n**a, n**b)
    c_norm = n / max(m ** (1 / a), m ** (1 / b))
    return NormModularCheck(
        norm=n,
        modular=m,
        modular_constant=max(1.0, c_modular),
        norm_constant=max(1.0, c_norm),
        passed=c_modular <= 1 + slack and c_norm <= 1 + slack,
    )


@dataclass(frozen=True)
class ProfilePoint:
    y: float
    result: "Optional[LuxemburgResult]"
    error: "Optional[dict[str, Any]]" = None

    def as_dict(self) -> "dict[str, Any]":
        return {
            "y": self.y,
            "result": None if self.result is None else self.result.as_dict(),
            "error": self.error,
        }


@dataclass(frozen=True)
class LineNormProfile:
    points: "tuple[ProfilePoint, ...]"
    norm_estimate: "Optional[float]"
    non_increasing: bool
    in_space: bool
    extrapolated: bool = True

    def norms(self) -> "list[tuple[float, float]]":
        return [(p.y, p.result.norm) for p in self.points if p.result is not None]

    def as_dict(self) -> "dict[str, Any]":
        return {
            "points": [p.as_dict() for p in self.points],
            "norm_estimate": self.norm_estimate,
            "non_increasing": self.non_increasing,
            "in_space": self.in_space,
            "extrapolated": self.extrapolated,
        }


def line_norm_profile(
    f: HalfPlaneFunction,
    phi: "GrowthFunction",
    y_grid: "Sequence[float]",
    tol: float = 1e-8,
) -> LineNormProfile:
    """
    Luxemburg norms of ``x -> F(x + iy)`` over ``y_grid``.

    The norm estimate is the value at the smallest ``y`` and is flagged as an
    extrapolation of the sup over all lines.
    """
    points = []
    for y in sorted(float(v) for v in y_grid):
        try:
            result = luxemburg_norm(f.restrict(y), phi, tol=tol)
        except AccuracyFailure as exc:
            logger.warning("line norm at y=%g failed: %s", y, exc)
            points.append(ProfilePoint(y, None, exc.as_dict()))
        else:
            points.append(ProfilePoint(y, result))
    norms = [p.result.norm for p in points if p.result is not None]
    in_space = all(p.result is None or p.result.in_space for p in points)
    non_increasing = in_space and all(
        later <= earlier * (1 + 2 * tol) for earlier, later in zip(norms, norms[1:])
    )
    estimate = norms[0] if norms and in_space else None
    if estimate is not None:
        logger.info("line-norm estimate %.6g taken at y=%g (extrapolated)", estimate, points[0].y)
    return LineNormProfile(tuple(points), estimate, non_increasing, in_space)
