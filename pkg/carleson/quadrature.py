"""
Carleson squares, measures on the upper half-plane and adaptive quadrature.

Integration over the half-plane runs in two passes. The first pass samples
the integrand on a coarse geometric cell layout to get a size estimate; that
estimate fixes the truncation radius at which the declared power-decay
envelope bounds the tail by a tenth of the target accuracy. The second pass
subdivides the cells carrying the largest local error (the difference between
two product Gauss rules of different order) until the summed error meets the
target. Cells touching ``y = 0`` use Gauss-Jacobi nodes in ``y`` so that
weights ``y**e`` with ``-1 < e < 0`` are integrated exactly.
"""

import logging
import math

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from scipy import special

from carleson.conf import get_setting
from carleson.exceptions import AccuracyFailure, InvalidInput, InvalidParameter


if TYPE_CHECKING:
    from typing import Any, Callable, Optional, Sequence

    from carleson.typing import FloatArray, PlaneEvaluator


logger = logging.getLogger(__name__)

# Smallest and largest initial cell size relative to the integrand scale.
_INNER_OCTAVES = 4
_OUTER_OCTAVES = 64


def _positive(name: str, value: "Any") -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInput(f"{name} must be finite, got {value!r}")
    if value <= 0:
        raise InvalidParameter(f"{name} must be positive, got {value}")
    return value


def _alpha(alpha: "Any") -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise InvalidInput(f"alpha must be finite, got {alpha!r}")
    if alpha <= -1:
        raise InvalidParameter(f"alpha must be > -1, got {alpha}")
    return alpha


# Geometry.


@dataclass(frozen=True)
class Interval:
    """Half-open interval ``[center - length/2, center + length/2)``."""

    center: float
    length: float

    def __post_init__(self) -> None:
        center = float(self.center)
        if not math.isfinite(center):
            raise InvalidInput(f"interval center must be finite, got {center!r}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "length", _positive("interval length", self.length))

    @classmethod
    def from_endpoints(cls, left: float, right: float) -> "Interval":
        return cls((left + right) / 2, right - left)

    @property
    def left(self) -> float:
        return self.center - self.length / 2

    @property
    def right(self) -> float:
        return self.center + self.length / 2

    def contains_interval(self, other: "Interval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def as_dict(self) -> "dict[str, Any]":
        return {"center": self.center, "length": self.length}


@dataclass(frozen=True)
class Box:
    """
    Rectangle ``[x_lo, x_hi) x [y_lo, y_hi)`` in the closed upper half-plane.

    Boxes are half-open like dyadic intervals, so boxes that tile a region
    never share an atom. Continuous measures do not see the difference.
    """

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self) -> None:
        values = (self.x_lo, self.x_hi, self.y_lo, self.y_hi)
        if not all(math.isfinite(v) for v in values):
            raise InvalidInput(f"box corners must be finite, got {values}")
        if self.x_hi <= self.x_lo or self.y_hi <= self.y_lo or self.y_lo < 0:
            raise InvalidParameter(f"degenerate box {values}")

    @property
    def area(self) -> float:
        return (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)

    def intersect(self, other: "Box") -> "Optional[Box]":
        x_lo, x_hi = max(self.x_lo, other.x_lo), min(self.x_hi, other.x_hi)
        y_lo, y_hi = max(self.y_lo, other.y_lo), min(self.y_hi, other.y_hi)
        if x_hi <= x_lo or y_hi <= y_lo:
            return None
        return Box(x_lo, x_hi, y_lo, y_hi)

    def contains(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (self.x_lo <= x) & (x < self.x_hi) & (self.y_lo <= y) & (y < self.y_hi)

    def as_dict(self) -> "dict[str, Any]":
        return {"x": [self.x_lo, self.x_hi], "y": [self.y_lo, self.y_hi]}


@dataclass(frozen=True)
class CarlesonSquare:
    """The box ``{x + iy : x in I, 0 < y < |I|}`` over an interval ``I``."""

    base: Interval

    @property
    def box(self) -> Box:
        return Box(self.base.left, self.base.right, 0.0, self.base.length)

    def contains(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        return self.box.contains(x, y) & (np.asarray(y, dtype=float) > 0)


def box_volume(interval: Interval, alpha: float) -> float:
    """``|I|**(2 + alpha) / (1 + alpha)``, the ``V_alpha`` volume of ``Q_I``."""
    alpha = _alpha(alpha)
    return interval.length ** (2 + alpha) / (1 + alpha)


# Envelopes and integrands.


@dataclass(frozen=True)
class Envelope:
    """
    Power-decay bound ``|f(w)| <= amplitude * |w - center|**(-decay)``.

    The bound is declared valid for ``|w - center| >= radius``; ``center`` is a
    point on the real axis.
    """

    amplitude: float
    decay: float
    center: float = 0.0
    radius: float = 0.0

    def scaled(self, factor: float) -> "Envelope":
        return Envelope(self.amplitude * abs(factor), self.decay, self.center, self.radius)

    def bound(self, r: float) -> float:
        return self.amplitude * r ** (-self.decay)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "amplitude": self.amplitude,
            "decay": self.decay,
            "center": self.center,
            "radius": self.radius,
        }


@dataclass(frozen=True)
class Integrand:
    """
    A nonnegative function of ``(x, y)`` with the hints the cell layout needs.

    ``center`` and ``scale`` locate where the mass sits; ``envelope`` allows
    integration over the whole half-plane, ``support`` restricts it to a box.
    """

    func: "PlaneEvaluator"
    center: float = 0.0
    scale: float = 1.0
    envelope: "Optional[Envelope]" = None
    support: "Optional[Box]" = None

    def __call__(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        return np.asarray(self.func(x, y), dtype=float)


def tail_bound(
    envelope: Envelope,
    radius: float,
    weight_bounds: "Sequence[tuple[float, float]]",
) -> float:
    """
    Bound of the integral of the envelope over ``|w - center| >= radius``.

    ``weight_bounds`` lists ``(A, e)`` pairs with measure weight
    ``<= sum A * y**e``. Infinite when the envelope decays too slowly.
    """
    radius = max(radius, envelope.radius)
    total = 0.0
    for amplitude, exponent in weight_bounds:
        excess = envelope.decay - exponent - 2
        if excess <= 0:
            return math.inf
        angular = beta_value(0.5, (exponent + 1) / 2)
        total += (
            envelope.amplitude * amplitude * angular * radius ** (exponent + 2 - envelope.decay)
        ) / excess
    return total


# Special functions and oracles.


def beta_value(m: float, n: float) -> float:
    """Beta function ``B(m, n)`` through the log-Gamma identity."""
    m = _positive("m", m)
    n = _positive("n", n)
    return math.exp(special.betaln(m, n))


@dataclass(frozen=True)
class OracleValue:
    value: float
    divergent: bool = False

    def as_dict(self) -> "dict[str, Any]":
        return {"value": None if self.divergent else self.value, "divergent": self.divergent}


def oracle_line_integral(exponent: float, y: float) -> OracleValue:
    """``int_R |x + iy|**(-exponent) dx``; converges iff ``exponent > 1``."""
    y = _positive("y", y)
    if exponent <= 1:
        return OracleValue(math.inf, divergent=True)
    return OracleValue(beta_value(0.5, (exponent - 1) / 2) * y ** (1 - exponent))


def oracle_vertical_integral(alpha: float, exponent: float, t: float) -> OracleValue:
    """``int_0^inf y**alpha (t + y)**(-exponent) dy``; needs ``alpha > -1``, ``exponent > alpha + 1``."""
    t = _positive("t", t)
    if alpha <= -1 or exponent <= alpha + 1:
        return OracleValue(math.inf, divergent=True)
    return OracleValue(beta_value(1 + alpha, exponent - alpha - 1) * t ** (alpha + 1 - exponent))


def oracle_kernel_integral(alpha: float, exponent: float, y: float) -> OracleValue:
    """
    ``int |w - conj(z)|**(-exponent) dV_alpha(w)`` for ``Im z = y``.

    Composition of the two oracles above; converges iff ``exponent > alpha + 2``.
    """
    line = oracle_line_integral(exponent, 1.0)
    vertical = oracle_vertical_integral(alpha, exponent - 1, y)
    if line.divergent or vertical.divergent:
        return OracleValue(math.inf, divergent=True)
    return OracleValue(line.value * vertical.value)


# Quadrature configuration and results.


@dataclass(frozen=True)
class Truncation:
    x_half_width: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        _positive("x_half_width", self.x_half_width)
        _positive("y_max", self.y_max)
        if not 0 <= self.y_min < self.y_max:
            raise InvalidParameter("truncation needs 0 <= y_min < y_max")

    def box(self, center: float) -> Box:
        return Box(center - self.x_half_width, center + self.x_half_width, self.y_min, self.y_max)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-8
    truncation: "Optional[Truncation]" = None
    max_subdivisions: int = 4000
    order: int = 10

    def __post_init__(self) -> None:
        _positive("abs_tol", self.abs_tol)
        _positive("rel_tol", self.rel_tol)
        if self.max_subdivisions < 1:
            raise InvalidParameter("max_subdivisions must be at least 1")
        if self.order < 4:
            raise InvalidParameter("quadrature order must be at least 4")

    @classmethod
    def default(cls) -> "QuadratureConfig":
        return cls.from_dict({})

    @classmethod
    def from_dict(cls, data: "dict[str, Any]") -> "QuadratureConfig":
        values = {**get_setting("QUADRATURE"), **data}
        truncation = values.get("truncation")
        return cls(
            abs_tol=float(values["abs_tol"]),
            rel_tol=float(values["rel_tol"]),
            truncation=Truncation(**truncation) if truncation else None,
            max_subdivisions=int(values["max_subdivisions"]),
            order=int(values["order"]),
        )

    def as_dict(self) -> "dict[str, Any]":
        return {
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "max_subdivisions": self.max_subdivisions,
            "order": self.order,
            "truncation": (
                None
                if self.truncation is None
                else {
                    "x_half_width": self.truncation.x_half_width,
                    "y_min": self.truncation.y_min,
                    "y_max": self.truncation.y_max,
                }
            ),
        }


@dataclass(frozen=True)
class QuadratureRule:
    """Flattened nodes and weights of an adapted rule; weights include the measure."""

    x: "FloatArray"
    y: "FloatArray"
    weights: "FloatArray"

    def apply(self, func: "PlaneEvaluator") -> float:
        return float(np.sum(self.weights * np.asarray(func(self.x, self.y), dtype=float)))

    def measure_where(self, mask: "FloatArray") -> float:
        return float(np.sum(self.weights[np.asarray(mask, dtype=bool)]))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    tail_bound: float = 0.0
    cells: int = 0
    region: "Optional[Box]" = None
    bottom: str = "none"
    rule: "Optional[QuadratureRule]" = field(default=None, repr=False, compare=False)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "tail_bound": self.tail_bound,
            "cells": self.cells,
            "region": self.region.as_dict() if self.region else None,
            "bottom": self.bottom,
        }


# Gauss rules on [0, 1].


@lru_cache(maxsize=None)
def _legendre_unit(n: int) -> "tuple[FloatArray, FloatArray]":
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return (nodes + 1) / 2, weights / 2


@lru_cache(maxsize=None)
def _jacobi_unit(n: int, exponent: float) -> "tuple[FloatArray, FloatArray]":
    """Nodes and weights for ``int_0^1 g(u) u**exponent du``."""
    if exponent == 0:
        return _legendre_unit(n)
    nodes, weights = special.roots_jacobi(n, 0.0, exponent)
    return (nodes + 1) / 2, weights / 2 ** (exponent + 1)


def _cell_nodes(
    cells: "FloatArray", n: int, exponent: float
) -> "tuple[FloatArray, FloatArray, FloatArray]":
    """Nodes and ``y**exponent``-weighted weights of a product rule, shape ``(m, n, n)``."""
    ux, wx = _legendre_unit(n)
    uj, wj = _jacobi_unit(n, exponent)
    x0, x1, y0, y1 = cells[:, 0:1], cells[:, 1:2], cells[:, 2:3], cells[:, 3:4]
    x = x0 + (x1 - x0) * ux
    wxs = (x1 - x0) * wx
    bottom = cells[:, 2:3] == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        y_plain = y0 + (y1 - y0) * ux
        wy_plain = (y1 - y0) * wx * np.power(y_plain, exponent)
        y_bottom = y1 * uj
        wy_bottom = np.power(y1, exponent + 1) * wj
    y = np.where(bottom, y_bottom, y_plain)
    wy = np.where(bottom, wy_bottom, wy_plain)
    X = np.broadcast_to(x[:, :, None], (len(cells), n, n))
    Y = np.broadcast_to(y[:, None, :], (len(cells), n, n))
    W = wxs[:, :, None] * wy[:, None, :]
    return X, Y, W


def _geometric_breaks(lo: float, hi: float, anchor: float, scale: float) -> "FloatArray":
    steps = scale * 2.0 ** np.arange(-_INNER_OCTAVES, _OUTER_OCTAVES)
    points = np.concatenate([[lo, hi, anchor], anchor - steps, anchor + steps])
    points = points[(points >= lo) & (points <= hi)]
    return np.unique(points)


def _initial_cells(region: Box, center: float, scale: float) -> "FloatArray":
    xs = _geometric_breaks(region.x_lo, region.x_hi, center, scale)
    ys = _geometric_breaks(region.y_lo, region.y_hi, 0.0, scale)
    x0, y0 = np.meshgrid(xs[:-1], ys[:-1], indexing="ij")
    x1, y1 = np.meshgrid(xs[1:], ys[1:], indexing="ij")
    return np.stack([x0.ravel(), x1.ravel(), y0.ravel(), y1.ravel()], axis=1)


def _split(cells: "FloatArray") -> "FloatArray":
    x0, x1, y0, y1 = cells.T
    xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
    return np.concatenate(
        [
            np.stack([x0, xm, y0, ym], axis=1),
            np.stack([xm, x1, y0, ym], axis=1),
            np.stack([x0, xm, ym, y1], axis=1),
            np.stack([xm, x1, ym, y1], axis=1),
        ]
    )


class _CellIntegrator:
    """Evaluates a weighted integrand cell-by-cell with an embedded error estimate."""

    def __init__(
        self,
        func: "PlaneEvaluator",
        exponent: float,
        order: int,
    ) -> None:
        self.func = func
        self.exponent = exponent
        self.high = order
        self.low = order - 3

    def _apply(self, cells: "FloatArray", n: int) -> "FloatArray":
        X, Y, W = _cell_nodes(cells, n, self.exponent)
        with np.errstate(all="ignore"):
            F = np.asarray(self.func(X, Y), dtype=float)
        if not np.all(np.isfinite(F)):
            raise InvalidInput("integrand or density is not finite at a quadrature node")
        if np.any(F < 0):
            raise InvalidInput("integrand or density is negative at a quadrature node")
        return (W * F).sum(axis=(1, 2))

    def __call__(self, cells: "FloatArray") -> "tuple[FloatArray, FloatArray]":
        high = self._apply(cells, self.high)
        low = self._apply(cells, self.low)
        return high, np.abs(high - low)

    def rule(self, cells: "FloatArray") -> QuadratureRule:
        X, Y, W = _cell_nodes(cells, self.high, self.exponent)
        return QuadratureRule(X.ravel().copy(), Y.ravel().copy(), W.ravel().copy())


def adaptive_integrate(
    func: "PlaneEvaluator",
    region: Box,
    exponent: float,
    cfg: QuadratureConfig,
    center: float = 0.0,
    scale: float = 1.0,
    target: "Optional[float]" = None,
) -> "tuple[float, float, FloatArray, _CellIntegrator]":
    """
    Integrate ``func * y**exponent`` over ``region`` by cell refinement.

    Returns ``(value, error, cells, integrator)``. ``target`` overrides the
    accuracy goal, otherwise ``max(abs_tol, rel_tol * |value|)``.
    """
    integrator = _CellIntegrator(func, exponent, cfg.order)
    cells = _initial_cells(region, center, scale)
    values, errors = integrator(cells)
    splits = 0
    while True:
        value = float(values.sum())
        error = float(errors.sum())
        goal = target if target is not None else max(cfg.abs_tol, cfg.rel_tol * abs(value))
        if error <= goal:
            break
        if splits >= cfg.max_subdivisions:
            raise AccuracyFailure(
                f"quadrature did not converge within {cfg.max_subdivisions} subdivisions",
                partial_value=value,
                error_estimate=error,
            )
        order = np.argsort(-errors, kind="stable")
        count = min(max(1, len(order) // 8), cfg.max_subdivisions - splits)
        chosen = order[:count]
        keep = np.ones(len(cells), dtype=bool)
        keep[chosen] = False
        children = _split(cells[chosen])
        child_values, child_errors = integrator(children)
        cells = np.concatenate([cells[keep], children])
        values = np.concatenate([values[keep], child_values])
        errors = np.concatenate([errors[keep], child_errors])
        splits += count
        logger.debug(
            "quadrature refinement: %d cells, value %.12g, error %.3g", len(cells), value, error
        )
    return value, error, cells, integrator


# Measures.


class Measure:
    """A positive measure on the upper half-plane."""

    kind = "abstract"

    def weight_exponent(self) -> float:
        return 0.0

    def reduced_density(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        """Density divided by ``y**weight_exponent()``."""
        return np.ones_like(np.asarray(x, dtype=float))

    def weight_bounds(self) -> "Optional[list[tuple[float, float]]]":
        """``(A, e)`` pairs bounding the density by ``sum A * y**e``, if known."""
        return None

    def integrate(
        self, integrand: Integrand, cfg: "Optional[QuadratureConfig]" = None
    ) -> QuadratureResult:
        cfg = cfg or QuadratureConfig.default()
        exponent = self.weight_exponent()

        def weighted(x: "FloatArray", y: "FloatArray") -> "FloatArray":
            return integrand(x, y) * self.reduced_density(x, y)

        region, tail, bounded = self._region(integrand, cfg)
        if region is None:
            return QuadratureResult(0.0, 0.0, 0.0, 0, None, "empty")
        if not bounded:
            # First pass fixes the truncation radius from a size estimate.
            probe = _CellIntegrator(weighted, exponent, cfg.order)
            estimate = float(probe(_initial_cells(region, integrand.center, integrand.scale))[0].sum())
            region, tail = self._truncate(integrand, cfg, estimate)
        value, error, cells, integrator = adaptive_integrate(
            weighted,
            region,
            exponent,
            cfg,
            center=integrand.center,
            scale=integrand.scale,
            target=None,
        )
        bottom = f"jacobi({exponent:g})" if region.y_lo == 0 else f"floor({region.y_lo:g})"
        rule = integrator.rule(cells)
        with np.errstate(all="ignore"):
            density = np.asarray(self.reduced_density(rule.x, rule.y), dtype=float)
        return QuadratureResult(
            value=value,
            error_estimate=error + tail,
            tail_bound=tail,
            cells=len(cells),
            region=region,
            bottom=bottom,
            rule=QuadratureRule(rule.x, rule.y, rule.weights * density),
        )

    def _region(
        self, integrand: Integrand, cfg: QuadratureConfig
    ) -> "tuple[Optional[Box], float, bool]":
        """Return the region to integrate, its tail bound and whether it is final."""
        if integrand.support is not None:
            region: "Optional[Box]" = integrand.support
            if cfg.truncation is not None:
                region = region.intersect(cfg.truncation.box(integrand.center))
            return region, 0.0, True
        if integrand.envelope is None:
            if cfg.truncation is None:
                raise InvalidInput(
                    "integrand on the whole half-plane needs a decay envelope, "
                    "a support box or an explicit truncation"
                )
            logger.warning("integrating without a tail bound over an explicit truncation")
            return cfg.truncation.box(integrand.center), math.nan, True
        bounds = self.weight_bounds()
        if bounds is None:
            if cfg.truncation is None:
                raise InvalidInput(
                    f"{self.kind} measure has no declared growth bound; "
                    "an explicit truncation is required"
                )
            return cfg.truncation.box(integrand.center), math.nan, True
        if tail_bound(integrand.envelope, 1.0, bounds) == math.inf:
            raise InvalidParameter(
                f"envelope decay {integrand.envelope.decay:g} is too slow for "
                f"integrability against this measure"
            )
        if cfg.truncation is not None:
            truncation = cfg.truncation
            radius = min(truncation.x_half_width, truncation.y_max)
            return truncation.box(integrand.center), tail_bound(
                integrand.envelope, radius, bounds
            ), True
        radius = max(integrand.envelope.radius, integrand.scale * 2.0**12)
        return _half_disc_box(integrand, radius), 0.0, False

    def _truncate(
        self, integrand: Integrand, cfg: QuadratureConfig, estimate: float
    ) -> "tuple[Box, float]":
        assert integrand.envelope is not None
        bounds = self.weight_bounds() or []
        goal = 0.1 * max(cfg.abs_tol, cfg.rel_tol * abs(estimate))
        radius = max(integrand.envelope.radius, integrand.scale)
        tail = tail_bound(integrand.envelope, radius, bounds)
        while tail > goal and radius < 1e300:
            radius *= 2.0
            tail = tail_bound(integrand.envelope, radius, bounds)
        return _half_disc_box(integrand, radius), tail

    def of_square(
        self, square: CarlesonSquare, cfg: "Optional[QuadratureConfig]" = None
    ) -> float:
        indicator = Integrand(
            func=lambda x, y: np.ones_like(np.asarray(x, dtype=float)),
            center=square.base.center,
            scale=square.base.length,
            support=square.box,
        )
        return self.integrate(indicator, cfg).value

    def describe(self) -> "dict[str, Any]":
        return {"kind": self.kind}


def _half_disc_box(integrand: Integrand, radius: float) -> Box:
    assert integrand.envelope is not None
    center = integrand.envelope.center
    return Box(center - radius, center + radius, 0.0, radius)


@dataclass(frozen=True)
class LebesgueAlpha(Measure):
    """``dV_alpha = y**alpha dx dy``."""

    alpha: float = 0.0
    kind = "lebesgue_alpha"

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _alpha(self.alpha))

    def weight_exponent(self) -> float:
        return self.alpha

    def weight_bounds(self) -> "list[tuple[float, float]]":
        return [(1.0, self.alpha)]

    def of_square(
        self, square: CarlesonSquare, cfg: "Optional[QuadratureConfig]" = None
    ) -> float:
        return box_volume(square.base, self.alpha)

    def describe(self) -> "dict[str, Any]":
        return {"kind": self.kind, "alpha": self.alpha}


@dataclass(frozen=True)
class Density(Measure):
    """
    Absolutely continuous measure ``density(x, y) dx dy``.

    ``y_exponent`` declares the behaviour ``density ~ y**y_exponent`` near the
    boundary; bottom cells integrate against that weight exactly. ``y_min``
    cuts the region off above the boundary instead. ``bounds`` are ``(A, e)``
    pairs with ``density <= sum A * y**e`` everywhere, used for tail bounds.
    """

    density: "PlaneEvaluator" = field(compare=False)
    y_exponent: float = 0.0
    y_min: float = 0.0
    bounds: "Optional[tuple[tuple[float, float], ...]]" = None
    description: str = ""
    kind = "density"

    def __post_init__(self) -> None:
        if self.y_exponent <= -1:
            raise InvalidParameter(
                f"declared boundary exponent must be > -1, got {self.y_exponent}"
            )
        if self.y_min < 0:
            raise InvalidParameter("y_min must be nonnegative")

    def weight_exponent(self) -> float:
        return self.y_exponent if self.y_min == 0 else 0.0

    def reduced_density(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        values = np.asarray(self.density(x, y), dtype=float)
        values = np.where(np.asarray(y) >= self.y_min, values, 0.0)
        exponent = self.weight_exponent()
        if exponent == 0:
            return values
        return values / np.power(y, exponent)

    def weight_bounds(self) -> "Optional[list[tuple[float, float]]]":
        return None if self.bounds is None else [tuple(b) for b in self.bounds]  # type: ignore[misc]

    def _region(
        self, integrand: Integrand, cfg: QuadratureConfig
    ) -> "tuple[Optional[Box], float, bool]":
        region, tail, final = super()._region(integrand, cfg)
        if region is not None and self.y_min > 0:
            region = region.intersect(Box(region.x_lo, region.x_hi, self.y_min, max(region.y_hi, self.y_min * 2)))
        return region, tail, final

    def _truncate(
        self, integrand: Integrand, cfg: QuadratureConfig, estimate: float
    ) -> "tuple[Box, float]":
        region, tail = super()._truncate(integrand, cfg, estimate)
        if self.y_min > 0:
            clipped = region.intersect(Box(region.x_lo, region.x_hi, self.y_min, region.y_hi))
            if clipped is not None:
                region = clipped
        return region, tail

    def describe(self) -> "dict[str, Any]":
        return {
            "kind": self.kind,
            "density": self.description,
            "y_exponent": self.y_exponent,
            "y_min": self.y_min,
        }


@dataclass(frozen=True)
class Atomic(Measure):
    """Finite sum of point masses ``sum m_k delta_{x_k + i y_k}``."""

    points: "tuple[tuple[float, float, float], ...]"
    kind = "atomic"

    def __post_init__(self) -> None:
        points = []
        for point in self.points:
            x, y, mass = (float(v) for v in point)
            if not all(math.isfinite(v) for v in (x, y, mass)):
                raise InvalidInput(f"atom {point!r} is not finite")
            if y <= 0:
                raise InvalidParameter(f"atoms must lie in the upper half-plane, got y={y}")
            if mass <= 0:
                raise InvalidParameter(f"atom masses must be positive, got {mass}")
            points.append((x, y, mass))
        object.__setattr__(self, "points", tuple(points))

    @property
    def _arrays(self) -> "tuple[FloatArray, FloatArray, FloatArray]":
        data = np.asarray(self.points, dtype=float).reshape(-1, 3)
        return data[:, 0], data[:, 1], data[:, 2]

    def integrate(
        self, integrand: Integrand, cfg: "Optional[QuadratureConfig]" = None
    ) -> QuadratureResult:
        x, y, mass = self._arrays
        values = integrand(x, y)
        if integrand.support is not None:
            values = np.where(integrand.support.contains(x, y), values, 0.0)
        if not np.all(np.isfinite(values)):
            raise InvalidInput("integrand is not finite at an atom")
        return QuadratureResult(
            value=float(np.sum(mass * values)),
            error_estimate=0.0,
            cells=len(mass),
            bottom="atomic",
            rule=QuadratureRule(x, y, mass),
        )

    def of_square(
        self, square: CarlesonSquare, cfg: "Optional[QuadratureConfig]" = None
    ) -> float:
        x, y, mass = self._arrays
        return float(np.sum(mass[square.contains(x, y)]))

    def describe(self) -> "dict[str, Any]":
        return {"kind": self.kind, "points": [list(p) for p in self.points]}


def integrate(
    measure: Measure,
    integrand: "Integrand | Callable[[FloatArray, FloatArray], FloatArray]",
    cfg: "Optional[QuadratureConfig]" = None,
    support: "Optional[Box]" = None,
) -> QuadratureResult:
    if not isinstance(integrand, Integrand):
        integrand = Integrand(func=integrand, support=support)
    return measure.integrate(integrand, cfg)


def measure_of_square(
    measure: Measure, square: CarlesonSquare, cfg: "Optional[QuadratureConfig]" = None
) -> float:
    return measure.of_square(square, cfg)


# Calibration against the oracles.

ORACLE_TRIPLES: "tuple[tuple[float, float, float], ...]" = tuple(
    (alpha, alpha + offset, y)
    for alpha in (-0.5, 0.0, 0.5, 1.0, 2.0)
    for offset in (3.0, 4.5)
    for y in (1e-2, 10.0)
)


@dataclass(frozen=True)
class OracleCheck:
    alpha: float
    exponent: float
    y: float
    oracle: float
    computed: float
    error_estimate: float

    @property
    def relative_error(self) -> float:
        return abs(self.computed - self.oracle) / abs(self.oracle)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "alpha": self.alpha,
            "exponent": self.exponent,
            "y": self.y,
            "oracle": self.oracle,
            "computed": self.computed,
            "error_estimate": self.error_estimate,
            "relative_error": self.relative_error,
        }


def oracle_check(
    alpha: float, exponent: float, y: float, cfg: "Optional[QuadratureConfig]" = None
) -> OracleCheck:
    """Integrate ``|w + iy|**(-exponent)`` against ``V_alpha`` and compare with the oracle."""
    oracle = oracle_kernel_integral(alpha, exponent, y)
    if oracle.divergent:
        raise InvalidParameter(
            f"kernel integral diverges for exponent {exponent} <= alpha + 2 = {alpha + 2}"
        )
    integrand = Integrand(
        func=lambda x, v: np.power(np.hypot(x, v + y), -exponent),
        center=0.0,
        scale=y,
        envelope=Envelope(1.0, exponent),
    )
    result = LebesgueAlpha(alpha).integrate(integrand, cfg)
    return OracleCheck(alpha, exponent, y, oracle.value, result.value, result.error_estimate)
