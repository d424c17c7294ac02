"""
Growth functions and their calculus.

A growth function is a continuous increasing bijection of ``[0, inf)`` onto
itself. The families here evaluate on numpy arrays (scalars come back as numpy
floats), expose their derivative and slope ratio ``t*phi'(t)/phi(t)``, and an
inverse that is closed-form where the family allows and a vectorised bisection
otherwise.

Everything that inspects the whole half-line (indices, class membership, the
Dini condition) is *grid-certified*: it is a statement about the scan grid,
never about every ``t > 0``.
"""

import logging
import math

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from carleson import trends
from carleson.conf import get_setting
from carleson.exceptions import (
    AccuracyFailure,
    DomainError,
    InvalidInput,
    InvalidParameter,
    RangeError,
)
from carleson.grids import ScanGrid, log_mesh


if TYPE_CHECKING:
    from typing import Any, Callable, Optional

    from carleson.typing import ArrayOrFloat, FloatArray


logger = logging.getLogger(__name__)

EVALUATION_MODES = ("value", "derivative", "slope_ratio")

# Relative slack when comparing a sup on a wide grid against a narrow one.
STABILITY_SLACK = 0.05


def _real(name: str, value: "Any") -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(value):
        raise InvalidInput(f"{name} must be finite, got {value!r}")
    return value


def _shaped(result: "FloatArray", like: "FloatArray") -> "ArrayOrFloat":
    return float(result) if np.ndim(like) == 0 else result


class GrowthFunction:
    """Interface shared by all growth function families."""

    family = "abstract"
    closed_form_inverse = False

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        raise NotImplementedError

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        raise NotImplementedError

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        return arr * self.derivative(arr) / self.value(arr)

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        return bisect_inverse(self, y)

    def params(self) -> "dict[str, Any]":
        return {}

    def describe(self) -> "dict[str, Any]":
        return {"family": self.family, **self.params()}

    def __call__(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.value(t)

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.family}({params})"


def bisect_inverse(phi: GrowthFunction, y: "ArrayOrFloat") -> "ArrayOrFloat":
    """
    Invert ``phi`` by bisection in log space.

    The bracket and relative tolerance come from ``INVERSION_BRACKET`` and
    ``INVERSION_RTOL``. Every element of ``y`` is solved in the same sweep.
    """
    arr = np.asarray(y, dtype=float)
    lo_bound, hi_bound = (float(b) for b in get_setting("INVERSION_BRACKET"))
    rtol = float(get_setting("INVERSION_RTOL"))
    positive = arr > 0
    target = np.where(positive, arr, 1.0)
    lo = np.full(arr.shape, lo_bound)
    hi = np.full(arr.shape, hi_bound)
    with np.errstate(over="ignore", under="ignore"):
        outside = positive & (
            (np.asarray(phi.value(lo)) > target) | (np.asarray(phi.value(hi)) < target)
        )
    if np.any(outside):
        raise RangeError(
            f"{phi} does not reach {arr[outside].ravel()[0]:.6g} "
            f"on [{lo_bound:g}, {hi_bound:g}]",
            bracket=(lo_bound, hi_bound),
        )
    steps = math.ceil(math.log2(math.log(hi_bound / lo_bound) / math.log1p(rtol)))
    with np.errstate(over="ignore", under="ignore"):
        for _ in range(steps):
            mid = np.sqrt(lo * hi)
            above = np.asarray(phi.value(mid)) >= target
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
    return _shaped(np.where(positive, np.sqrt(lo * hi), 0.0), arr)


@dataclass(frozen=True)
class Power(GrowthFunction):
    """``t**p``."""

    p: float
    family = "power"
    closed_form_inverse = True

    def __post_init__(self) -> None:
        p = _real("p", self.p)
        if p <= 0:
            raise InvalidParameter(f"power exponent must be positive, got {p}")
        object.__setattr__(self, "p", p)

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return np.power(np.asarray(t, dtype=float), self.p)

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return self.p * np.power(arr, self.p - 1)

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return np.zeros_like(np.asarray(t, dtype=float)) + self.p

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        return np.power(np.asarray(y, dtype=float), 1.0 / self.p)

    def params(self) -> "dict[str, Any]":
        return {"p": self.p}


@dataclass(frozen=True)
class PowerLog(GrowthFunction):
    """``t**p * log(e + t)**a``; increasing whenever ``a >= -p``."""

    p: float
    a: float
    family = "power-log"

    def __post_init__(self) -> None:
        p = _real("p", self.p)
        a = _real("a", self.a)
        if p <= 0:
            raise InvalidParameter(f"power-log exponent p must be positive, got {p}")
        if a < -p:
            raise InvalidParameter(f"power-log needs a >= -p, got p={p}, a={a}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)

    def _log(self, arr: "FloatArray") -> "FloatArray":
        return np.log(math.e + arr)

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        return np.power(arr, self.p) * np.power(self._log(arr), self.a)

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        log = self._log(arr)
        with np.errstate(divide="ignore"):
            head = self.p * np.power(arr, self.p - 1) * np.power(log, self.a)
        tail = np.power(arr, self.p) * self.a * np.power(log, self.a - 1) / (math.e + arr)
        return head + tail

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        return self.p + self.a * arr / ((math.e + arr) * self._log(arr))

    def params(self) -> "dict[str, Any]":
        return {"p": self.p, "a": self.a}


@dataclass(frozen=True)
class PiecewisePower(GrowthFunction):
    """
    Continuous piecewise power function.

    ``exponents[i]`` applies between ``breakpoints[i-1]`` and ``breakpoints[i]``;
    the first piece is ``t**exponents[0]`` and the coefficients of the others
    are fixed by continuity.
    """

    breakpoints: "tuple[float, ...]"
    exponents: "tuple[float, ...]"
    coefficients: "tuple[float, ...]" = field(init=False, repr=False, compare=False)
    family = "piecewise-power"
    closed_form_inverse = True

    def __post_init__(self) -> None:
        breakpoints = tuple(_real("breakpoint", b) for b in self.breakpoints)
        exponents = tuple(_real("exponent", p) for p in self.exponents)
        if len(exponents) != len(breakpoints) + 1:
            raise InvalidParameter("piecewise power needs one more exponent than breakpoints")
        if any(b <= 0 for b in breakpoints) or any(
            b1 <= b0 for b0, b1 in zip(breakpoints, breakpoints[1:])
        ):
            raise InvalidParameter("breakpoints must be positive and strictly increasing")
        if any(p <= 0 for p in exponents):
            raise InvalidParameter("piecewise exponents must be positive")
        coefficients = [1.0]
        for b, p_prev, p_next in zip(breakpoints, exponents, exponents[1:]):
            coefficients.append(coefficients[-1] * b**p_prev / b**p_next)
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "coefficients", tuple(coefficients))

    def _piece(self, arr: "FloatArray") -> "tuple[FloatArray, FloatArray]":
        index = np.searchsorted(self.breakpoints, arr, side="right")
        return (
            np.asarray(self.coefficients)[index],
            np.asarray(self.exponents)[index],
        )

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        c, p = self._piece(arr)
        return _shaped(c * np.power(arr, p), arr)

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        c, p = self._piece(arr)
        with np.errstate(divide="ignore"):
            return _shaped(c * p * np.power(arr, p - 1), arr)

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        return _shaped(self._piece(arr)[1] + 0.0 * arr, arr)

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(y, dtype=float)
        knots = np.asarray(self.value(np.asarray(self.breakpoints)), dtype=float)
        index = np.searchsorted(knots, arr, side="right")
        c = np.asarray(self.coefficients)[index]
        p = np.asarray(self.exponents)[index]
        return _shaped(np.power(arr / c, 1.0 / p), arr)

    def params(self) -> "dict[str, Any]":
        return {"breakpoints": list(self.breakpoints), "exponents": list(self.exponents)}


@dataclass(frozen=True)
class Tabulated(GrowthFunction):
    """
    Growth function given by a strictly increasing sample table.

    Values are linearly interpolated between samples and continued as power
    laws beyond the table, so the function stays a bijection and the inverse
    is the exact inverse of the interpolant.
    """

    ts: "tuple[float, ...]"
    values: "tuple[float, ...]"
    family = "tabulated"
    closed_form_inverse = True

    def __post_init__(self) -> None:
        ts = np.asarray([_real("t", t) for t in self.ts])
        vs = np.asarray([_real("value", v) for v in self.values])
        if len(ts) < 3 or len(ts) != len(vs):
            raise InvalidParameter("tabulated growth function needs at least 3 samples")
        if ts[0] <= 0 or vs[0] <= 0:
            raise InvalidParameter("tabulated samples must be positive")
        if np.any(np.diff(ts) <= 0) or np.any(np.diff(vs) <= 0):
            raise InvalidParameter("tabulated samples must be strictly increasing")
        object.__setattr__(self, "ts", tuple(ts.tolist()))
        object.__setattr__(self, "values", tuple(vs.tolist()))
        ratios = ts * np.gradient(vs, ts) / vs
        if np.min(ratios) < 1e-3 or np.max(ratios) > 1e3:
            logger.warning(
                "tabulated growth function has slope ratios in [%.3g, %.3g]; "
                "phi'(t) is not comparable to phi(t)/t on its samples",
                np.min(ratios),
                np.max(ratios),
            )

    @property
    def _t(self) -> "FloatArray":
        return np.asarray(self.ts)

    @property
    def _v(self) -> "FloatArray":
        return np.asarray(self.values)

    @property
    def end_slopes(self) -> "tuple[float, float]":
        t, v = self._t, self._v
        low = math.log(v[1] / v[0]) / math.log(t[1] / t[0])
        high = math.log(v[-1] / v[-2]) / math.log(t[-1] / t[-2])
        return low, high

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        ts, vs = self._t, self._v
        low, high = self.end_slopes
        with np.errstate(divide="ignore", over="ignore"):
            result = np.where(
                arr < ts[0],
                vs[0] * np.power(arr / ts[0], low),
                np.where(
                    arr > ts[-1],
                    vs[-1] * np.power(arr / ts[-1], high),
                    np.interp(arr, ts, vs),
                ),
            )
        return _shaped(result, arr)

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        ts, vs = self._t, self._v
        low, high = self.end_slopes
        nodes = np.gradient(vs, ts)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            result = np.where(
                arr < ts[0],
                low * vs[0] * np.power(arr / ts[0], low) / arr,
                np.where(
                    arr > ts[-1],
                    high * vs[-1] * np.power(arr / ts[-1], high) / arr,
                    np.interp(arr, ts, nodes),
                ),
            )
        return _shaped(result, arr)

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(y, dtype=float)
        ts, vs = self._t, self._v
        low, high = self.end_slopes
        with np.errstate(divide="ignore", over="ignore"):
            result = np.where(
                arr < vs[0],
                ts[0] * np.power(arr / vs[0], 1.0 / low),
                np.where(
                    arr > vs[-1],
                    ts[-1] * np.power(arr / vs[-1], 1.0 / high),
                    np.interp(arr, vs, ts),
                ),
            )
        return _shaped(result, arr)

    def params(self) -> "dict[str, Any]":
        return {"t": list(self.ts), "values": list(self.values)}


@dataclass(frozen=True)
class Composite(GrowthFunction):
    """``outer(inner(t))``."""

    outer: GrowthFunction
    inner: GrowthFunction
    family = "composite"

    @property
    def closed_form_inverse(self) -> bool:  # type: ignore[override]
        return self.outer.closed_form_inverse and self.inner.closed_form_inverse

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.outer.value(self.inner.value(t))

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.outer.derivative(self.inner.value(t)) * self.inner.derivative(t)

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.outer.slope_ratio(self.inner.value(t)) * self.inner.slope_ratio(t)

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.inner.inverse(self.outer.inverse(y))

    def params(self) -> "dict[str, Any]":
        return {"outer": self.outer.describe(), "inner": self.inner.describe()}


@dataclass(frozen=True)
class Inverse(GrowthFunction):
    """The inverse function of ``base`` viewed as a growth function."""

    base: GrowthFunction
    family = "inverse"
    closed_form_inverse = True

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.base.inverse(t)

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        with np.errstate(divide="ignore"):
            return 1.0 / self.base.derivative(self.base.inverse(t))

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return 1.0 / self.base.slope_ratio(self.base.inverse(t))

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.base.value(y)

    def params(self) -> "dict[str, Any]":
        return {"base": self.base.describe()}


@dataclass(frozen=True)
class PowerSubstitution(GrowthFunction):
    """``base(t**s)``."""

    base: GrowthFunction
    s: float
    family = "power-substitution"

    @property
    def closed_form_inverse(self) -> bool:  # type: ignore[override]
        return self.base.closed_form_inverse

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.base.value(np.power(np.asarray(t, dtype=float), self.s))

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            inner = self.s * np.power(arr, self.s - 1)
        return self.base.derivative(np.power(arr, self.s)) * inner

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        return self.s * self.base.slope_ratio(np.power(arr, self.s))

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        return np.power(np.asarray(self.base.inverse(y), dtype=float), 1.0 / self.s)

    def params(self) -> "dict[str, Any]":
        return {"base": self.base.describe(), "s": self.s}


@dataclass(frozen=True)
class Reciprocal(GrowthFunction):
    """``1 / base(1/t)`` with value 0 at 0."""

    base: GrowthFunction
    family = "reciprocal"

    @property
    def closed_form_inverse(self) -> bool:  # type: ignore[override]
        return self.base.closed_form_inverse

    def value(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        safe = np.where(arr > 0, arr, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            result = 1.0 / np.asarray(self.base.value(1.0 / safe))
        return _shaped(np.where(arr > 0, result, 0.0), arr)

    def derivative(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(t, dtype=float)
        inv = 1.0 / arr
        return self.base.derivative(inv) / (arr**2 * np.power(self.base.value(inv), 2))

    def slope_ratio(self, t: "ArrayOrFloat") -> "ArrayOrFloat":
        return self.base.slope_ratio(1.0 / np.asarray(t, dtype=float))

    def inverse(self, y: "ArrayOrFloat") -> "ArrayOrFloat":
        arr = np.asarray(y, dtype=float)
        safe = np.where(arr > 0, arr, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            result = 1.0 / np.asarray(self.base.inverse(1.0 / safe))
        return _shaped(np.where(arr > 0, result, 0.0), arr)

    def params(self) -> "dict[str, Any]":
        return {"base": self.base.describe()}


# Transforms. Power functions are composed symbolically; everything else is
# wrapped and evaluated numerically.


def inverse(phi: GrowthFunction) -> GrowthFunction:
    if isinstance(phi, Power):
        return Power(1.0 / phi.p)
    if isinstance(phi, Inverse):
        return phi.base
    return Inverse(phi)


def compose(outer: GrowthFunction, inner: GrowthFunction) -> GrowthFunction:
    if isinstance(outer, Power) and isinstance(inner, Power):
        return Power(outer.p * inner.p)
    return Composite(outer, inner)


def compose_inverse(phi2: GrowthFunction, phi1: GrowthFunction) -> GrowthFunction:
    """``phi2 o phi1^-1``."""
    return compose(phi2, inverse(phi1))


def power_subst(phi: GrowthFunction, s: float) -> GrowthFunction:
    """``phi(t**s)``."""
    s = _real("s", s)
    if s <= 0:
        raise InvalidParameter(f"power substitution needs s > 0, got {s}")
    if isinstance(phi, Power):
        return Power(phi.p * s)
    if isinstance(phi, PowerSubstitution):
        return power_subst(phi.base, phi.s * s)
    return PowerSubstitution(phi, s)


def reciprocal(phi: GrowthFunction) -> GrowthFunction:
    """``1 / phi(1/t)``."""
    if isinstance(phi, Power):
        return Power(phi.p)
    if isinstance(phi, Reciprocal):
        return phi.base
    return Reciprocal(phi)


def normalized_power_subst(
    phi: GrowthFunction, p: float, grid: "Optional[ScanGrid]" = None
) -> GrowthFunction:
    """``phi(t**(p / a_phi))``, whose lower index is ``p``."""
    return power_subst(phi, _real("p", p) / estimate_indices(phi, grid).lower)


TRANSFORMS: "dict[str, Callable[..., GrowthFunction]]" = {
    "compose_inverse": compose_inverse,
    "compose": compose,
    "inverse": inverse,
    "power_subst": power_subst,
    "reciprocal": reciprocal,
}


def transform(kind: str, *args: "Any") -> GrowthFunction:
    try:
        function = TRANSFORMS[kind]
    except KeyError:
        raise InvalidParameter(
            f"unknown transform {kind!r}; expected one of {sorted(TRANSFORMS)}"
        ) from None
    return function(*args)


# Pointwise operations.


def evaluate(phi: GrowthFunction, t: float, mode: str = "value") -> float:
    if mode not in EVALUATION_MODES:
        raise InvalidParameter(f"unknown evaluation mode {mode!r}")
    t = _real("t", t)
    if t < 0:
        raise DomainError(f"growth functions are defined for t >= 0, got {t}")
    if mode == "value":
        return float(phi.value(t))
    if t == 0:
        raise DomainError(f"{mode} is undefined at t = 0")
    if mode == "derivative":
        return float(phi.derivative(t))
    return float(phi.slope_ratio(t))


def invert(phi: GrowthFunction, y: float, tol: float = 1e-9) -> float:
    """Return ``t`` with ``|phi(t) - y| <= tol * max(1, y)``."""
    y = _real("y", y)
    if y < 0:
        raise DomainError(f"growth functions only take values >= 0, got {y}")
    if y == 0:
        return 0.0
    t = float(phi.inverse(y))
    residual = abs(float(phi.value(t)) - y)
    if residual > tol * max(1.0, y):
        raise AccuracyFailure(
            f"inverse of {phi} at {y:.6g} has residual {residual:.3g}",
            partial_value=t,
            error_estimate=residual,
        )
    return t


# Indices and classes.


@dataclass(frozen=True)
class GrowthIndices:
    lower: float
    upper: float
    grid: ScanGrid
    lower_at: float
    upper_at: float

    def as_dict(self) -> "dict[str, Any]":
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_at": self.lower_at,
            "upper_at": self.upper_at,
            "grid": self.grid.as_dict(),
        }


def indices_from_samples(
    phi: GrowthFunction, ts: "FloatArray", grid: ScanGrid
) -> GrowthIndices:
    with np.errstate(all="ignore"):
        ratios = np.asarray(phi.slope_ratio(ts), dtype=float)
    if not np.all(np.isfinite(ratios)) or np.any(ratios <= 0):
        raise InvalidInput(f"slope ratio of {phi} is not finite and positive on the grid")
    low, high = int(np.argmin(ratios)), int(np.argmax(ratios))
    return GrowthIndices(
        lower=float(ratios[low]),
        upper=float(ratios[high]),
        grid=grid,
        lower_at=float(ts[low]),
        upper_at=float(ts[high]),
    )


def estimate_indices(phi: GrowthFunction, grid: "Optional[ScanGrid]" = None) -> GrowthIndices:
    grid = grid or ScanGrid.default()
    grid.require_index_resolution()
    return indices_from_samples(phi, grid.values(), grid)


@dataclass(frozen=True)
class ConstantCheck:
    """A grid-certified inequality with its best constant."""

    name: str
    holds: bool
    constant: "Optional[float]"
    location: "Optional[tuple[float, ...]]" = None
    flags: "tuple[str, ...]" = ()

    def as_dict(self) -> "dict[str, Any]":
        return {
            "name": self.name,
            "holds": self.holds,
            "constant": self.constant,
            "location": list(self.location) if self.location is not None else None,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class DiniResult:
    """Grid sup of ``(int_0^t phi2(s)/s^2 ds) * t / phi1(t)``."""

    constant: "Optional[float]"
    sup_on_grid: float
    location: float
    unbounded: bool
    divergent: bool = False
    trend: "Optional[str]" = None

    @property
    def holds(self) -> bool:
        return not self.unbounded

    def as_dict(self) -> "dict[str, Any]":
        return {
            "constant": self.constant,
            "sup_on_grid": self.sup_on_grid,
            "location": self.location,
            "unbounded": self.unbounded,
            "divergent": self.divergent,
            "trend": self.trend,
        }


@dataclass(frozen=True)
class ClassReport:
    indices: GrowthIndices
    in_U: "Optional[float]"
    in_L: "Optional[float]"
    delta2: ConstantCheck
    nabla2: ConstantCheck
    nabla2_doubling: ConstantCheck
    tilde_conditions: "dict[str, ConstantCheck]"
    in_U_tilde: bool
    in_L_tilde: bool

    @property
    def in_U_and_nabla2(self) -> bool:
        return self.in_U is not None and self.nabla2.holds

    def as_dict(self) -> "dict[str, Any]":
        return {
            "indices": self.indices.as_dict(),
            "in_U": self.in_U,
            "in_L": self.in_L,
            "delta2": self.delta2.as_dict(),
            "nabla2": self.nabla2.as_dict(),
            "nabla2_doubling": self.nabla2_doubling.as_dict(),
            "tilde_conditions": {k: v.as_dict() for k, v in self.tilde_conditions.items()},
            "in_U_tilde": self.in_U_tilde,
            "in_L_tilde": self.in_L_tilde,
            "in_U_and_nabla2": self.in_U_and_nabla2,
        }


def _grid_sup(
    function: "Callable[[FloatArray, FloatArray], FloatArray]",
    lo: float,
    hi: float,
    points: int,
) -> "tuple[float, tuple[float, float]]":
    s, t = log_mesh(lo, hi, points)
    with np.errstate(all="ignore"):
        values = np.asarray(function(s, t), dtype=float)
    if np.all(np.isnan(values)):
        return math.nan, (math.nan, math.nan)
    index = int(np.nanargmax(values))
    return float(values.flat[index]), (float(s.flat[index]), float(t.flat[index]))


def _stable_sup(
    name: str,
    function: "Callable[[FloatArray, FloatArray], FloatArray]",
    full_range: bool,
) -> ConstantCheck:
    """
    Scan ``function`` on a narrow and on a wide 2-D log grid.

    The inequality holds on the grid when the wide sup is finite and does not
    exceed the narrow one by more than ``STABILITY_SLACK``.
    """
    if full_range:
        narrow, wide = (1e-2, 1e2), (1e-4, 1e4)
    else:
        narrow, wide = (1.0, 1e2), (1.0, 1e4)
    inner, _ = _grid_sup(function, *narrow, 81)
    outer, location = _grid_sup(function, *wide, 161)
    holds = math.isfinite(outer) and outer <= inner * (1 + STABILITY_SLACK)
    return ConstantCheck(name, holds, outer if math.isfinite(outer) else None, location)


def type_constant(phi: GrowthFunction, q: float, kind: str = "upper") -> ConstantCheck:
    """
    Best constant of ``phi(st) <= C t**q phi(s)`` for ``t >= 1`` (upper type)
    or ``t <= 1`` (lower type), scanned on a 2-D log grid.
    """
    if kind not in ("upper", "lower"):
        raise InvalidParameter(f"type kind must be 'upper' or 'lower', got {kind!r}")

    def ratio(s: "FloatArray", t: "FloatArray") -> "FloatArray":
        scale = t if kind == "upper" else 1.0 / t
        return phi.value(s * scale) / (scale**q * phi.value(s))

    return _stable_sup(f"{kind}_type", ratio, full_range=False)


def delta2_constant(phi: GrowthFunction, grid: "Optional[ScanGrid]" = None) -> ConstantCheck:
    """Grid sup of ``phi(2t)/phi(t)``."""
    ts = (grid or ScanGrid.default()).values()
    ratios = np.asarray(phi.value(2 * ts)) / np.asarray(phi.value(ts))
    index = int(np.argmax(ratios))
    direction = trends.unbounded_direction(ts, ratios)
    flags = (f"unbounded-{direction}",) if direction else ()
    return ConstantCheck(
        "delta2",
        holds=direction is None and bool(np.all(np.isfinite(ratios))),
        constant=float(ratios[index]),
        location=(float(ts[index]),),
        flags=flags,
    )


def nabla2_doubling_constant(
    phi: GrowthFunction, grid: "Optional[ScanGrid]" = None
) -> ConstantCheck:
    """Smallest ``C = 2**(k/16)`` with ``2C phi(t) <= phi(Ct)`` on the grid."""
    ts = (grid or ScanGrid.default()).values()
    base = np.asarray(phi.value(ts))
    for k in range(1, 257):
        c = 2.0 ** (k / 16)
        if np.all(2 * c * base <= np.asarray(phi.value(c * ts)) * (1 + 1e-12)):
            return ConstantCheck("nabla2_doubling", True, c)
    return ConstantCheck("nabla2_doubling", False, None, flags=("no-candidate",))


def dini_constant(
    phi1: GrowthFunction, phi2: GrowthFunction, grid: "Optional[ScanGrid]" = None
) -> DiniResult:
    """
    Grid sup of ``(int_0^t phi2(s)/s^2 ds) * t / phi1(t)``.

    The integral below the first grid point is closed with the local power law
    of ``phi2``; when that power is at most 1 the integral diverges. Between
    grid points an 8-point Gauss-Legendre rule in ``log s`` is used.
    """
    grid = grid or ScanGrid.default()
    ts = grid.values()
    k0 = min(
        float(phi2.slope_ratio(ts[0] * 1e-6)),
        float(phi2.slope_ratio(ts[0])),
    )
    if k0 <= 1 + 1e-9:
        return DiniResult(
            constant=None,
            sup_on_grid=math.inf,
            location=0.0,
            unbounded=True,
            divergent=True,
        )
    head = float(phi2.value(ts[0])) / ts[0] / (k0 - 1)
    nodes, weights = np.polynomial.legendre.leggauss(8)
    u = np.log(ts)
    half = (u[1:] - u[:-1]) / 2
    mid = (u[1:] + u[:-1]) / 2
    s = np.exp(mid[:, None] + half[:, None] * nodes[None, :])
    segments = (half[:, None] * weights[None, :] * np.asarray(phi2.value(s)) / s).sum(axis=1)
    integral = head + np.concatenate([[0.0], np.cumsum(segments)])
    ratio = integral * ts / np.asarray(phi1.value(ts))
    index = int(np.argmax(ratio))
    direction = trends.unbounded_direction(ts, ratio)
    logger.debug("dini ratio for (%s, %s): sup %.6g at %.3g", phi1, phi2, ratio[index], ts[index])
    return DiniResult(
        constant=None if direction else float(ratio[index]),
        sup_on_grid=float(ratio[index]),
        location=float(ts[index]),
        unbounded=direction is not None,
        trend=direction,
    )


@dataclass(frozen=True)
class QuotientVerdict:
    passed: bool
    worst_drop: float
    location: "Optional[float]"

    def as_dict(self) -> "dict[str, Any]":
        return {
            "passed": self.passed,
            "worst_drop": self.worst_drop,
            "location": self.location,
        }


def quotient_monotone(
    phi1: GrowthFunction,
    phi2: GrowthFunction,
    grid: "Optional[ScanGrid]" = None,
    rtol: float = 1e-9,
) -> QuotientVerdict:
    """Whether ``phi2/phi1`` is non-decreasing on the grid within ``rtol``."""
    ts = (grid or ScanGrid.default()).values()
    ratio = np.asarray(phi2.value(ts)) / np.asarray(phi1.value(ts))
    drops = (ratio[:-1] - ratio[1:]) / ratio[:-1]
    worst = int(np.argmax(drops))
    passed = bool(drops[worst] <= rtol)
    return QuotientVerdict(
        passed=passed,
        worst_drop=max(0.0, float(drops[worst])),
        location=None if passed else float(ts[worst + 1]),
    )


def quotient_bound_check(
    phi: GrowthFunction,
    lo: float = 1e-4,
    hi: float = 1e4,
    points: int = 161,
) -> ConstantCheck:
    """Grid sup of ``phi(s/t) phi(t) / phi(s)`` with its location ``(s, t)``."""

    def ratio(s: "FloatArray", t: "FloatArray") -> "FloatArray":
        return phi.value(s / t) * phi.value(t) / phi.value(s)

    constant, location = _grid_sup(ratio, lo, hi, points)
    finite = math.isfinite(constant)
    return ConstantCheck("quotient_bound", finite, constant if finite else None, location)


def classify(phi: GrowthFunction, grid: "Optional[ScanGrid]" = None) -> ClassReport:
    indices = estimate_indices(phi, grid)
    tol = 1e-12
    in_U = indices.upper if indices.lower >= 1 - tol else None
    in_L = indices.lower if indices.upper <= 1 + tol else None

    dini = dini_constant(phi, phi, grid)
    flags = ("divergent",) if dini.divergent else ()
    if dini.trend:
        flags += (f"unbounded-{dini.trend}",)
    nabla2 = ConstantCheck("nabla2", dini.holds, dini.constant, (dini.location,), flags)

    a, b = indices.lower, indices.upper
    tilde = {
        "submultiplicative": _stable_sup(
            "submultiplicative",
            lambda s, t: phi.value(s * t) / (phi.value(s) * phi.value(t)),
            full_range=True,
        ),
        "upper_quotient": _stable_sup(
            "upper_quotient",
            lambda s, t: phi.value(s / t) * t**a / phi.value(s),
            full_range=False,
        ),
        "lower_quotient": _stable_sup(
            "lower_quotient",
            lambda s, t: phi.value(s / t) * phi.value(t) / s**b,
            full_range=False,
        ),
        "upper_type": type_constant(phi, a, "upper"),
        "lower_type": type_constant(phi, b, "lower"),
    }
    in_U_tilde = (
        in_U is not None
        and tilde["upper_type"].holds
        and tilde["submultiplicative"].holds
        and tilde["upper_quotient"].holds
    )
    in_L_tilde = (
        in_L is not None
        and tilde["lower_type"].holds
        and tilde["submultiplicative"].holds
        and tilde["lower_quotient"].holds
    )
    return ClassReport(
        indices=indices,
        in_U=in_U,
        in_L=in_L,
        delta2=delta2_constant(phi, grid),
        nabla2=nabla2,
        nabla2_doubling=nabla2_doubling_constant(phi, grid),
        tilde_conditions=tilde,
        in_U_tilde=in_U_tilde,
        in_L_tilde=in_L_tilde,
    )
