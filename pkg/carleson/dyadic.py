"""
Shifted dyadic grids and maximal operators.

The grid ``D^beta`` (``beta`` in ``{0, 1/3}``) consists of the intervals
``2**-j * ([0, 1) + k + (-1)**j * beta)``. Endpoints are exact fractions so
containment and nesting never depend on rounding. Every interval ``I`` lies in
some ``J`` of one of the two grids with ``|J| <= 6|I|``.
"""

import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from carleson import trends
from carleson.conf import get_setting
from carleson.exceptions import (
    AccuracyFailure,
    InvalidInput,
    InvalidParameter,
    PreconditionViolation,
)
from carleson.functions import (
    HalfPlaneFunction,
    LineFunction,
    MappedLineFunction,
    PowerOf,
    StepFunction,
)
from carleson.grids import lambda_grid
from carleson.growth import dini_constant, estimate_indices
from carleson.norms import luxemburg_norm
from carleson.parallel import ordered_map
from carleson.quadrature import (
    Box,
    Envelope,
    Integrand,
    Interval,
    LebesgueAlpha,
    box_volume,
)


if TYPE_CHECKING:
    from typing import Any, Iterable, Optional, Sequence, Union

    from carleson.growth import DiniResult, GrowthFunction, ScanGrid
    from carleson.quadrature import QuadratureConfig
    from carleson.typing import FloatArray


logger = logging.getLogger(__name__)

GRID_SHIFTS = (Fraction(0), Fraction(1, 3))

# M_HL <= DOMINATION_FACTOR * sum over both grids of M^{D^beta}.
DOMINATION_FACTOR = 6

MAXIMAL_KINDS = ("HL", "HL_dyadic", "V_alpha_dyadic")


def as_shift(beta: "Any") -> Fraction:
    """Read a grid shift given as ``0``, ``"1/3"``, a float or a fraction."""
    try:
        value = Fraction(beta) if not isinstance(beta, float) else Fraction(beta).limit_denominator(3)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"grid shift must be 0 or 1/3, got {beta!r}") from exc
    if value not in GRID_SHIFTS:
        raise InvalidParameter(f"grid shift must be 0 or 1/3, got {beta!r}")
    return value


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """``2**-j * ([0, 1) + k + (-1)**j * beta)`` with exact endpoints."""

    beta: Fraction
    j: int
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", as_shift(self.beta))

    @property
    def length(self) -> Fraction:
        return Fraction(2) ** (-self.j)

    @property
    def shift(self) -> Fraction:
        return self.beta if self.j % 2 == 0 else -self.beta

    @property
    def left(self) -> Fraction:
        return (self.k + self.shift) * self.length

    @property
    def right(self) -> Fraction:
        return self.left + self.length

    def contains_point(self, x: "Union[float, Fraction]") -> bool:
        x = Fraction(x)
        return self.left <= x < self.right

    def contains(self, other: "DyadicInterval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def covers(self, interval: Interval) -> bool:
        return self.left <= Fraction(interval.left) and Fraction(interval.right) <= self.right

    def parent(self) -> "DyadicInterval":
        return grid_interval(self.beta, self.j - 1, self.left)

    def children(self) -> "tuple[DyadicInterval, DyadicInterval]":
        half = self.length / 2
        return (
            grid_interval(self.beta, self.j + 1, self.left),
            grid_interval(self.beta, self.j + 1, self.left + half),
        )

    def as_interval(self) -> Interval:
        return Interval.from_endpoints(float(self.left), float(self.right))

    def as_dict(self) -> "dict[str, Any]":
        return {
            "beta": str(self.beta),
            "j": self.j,
            "k": self.k,
            "left": float(self.left),
            "right": float(self.right),
        }


def grid_interval(beta: "Any", j: int, x: "Union[float, Fraction]") -> DyadicInterval:
    """The interval of scale ``j`` in ``D^beta`` containing ``x``."""
    beta = as_shift(beta)
    shift = beta if j % 2 == 0 else -beta
    k = math.floor(Fraction(x) * Fraction(2) ** j - shift)
    return DyadicInterval(beta, j, k)


def enclosing(beta: "Any", interval: Interval) -> DyadicInterval:
    """Smallest interval of ``D^beta`` containing ``interval``."""
    j = math.floor(-math.log2(interval.length))
    candidate = grid_interval(beta, j, interval.left)
    while not candidate.covers(interval):
        candidate = candidate.parent()
    return candidate


def dyadic_cover(interval: Interval) -> "tuple[Fraction, DyadicInterval]":
    """
    A grid interval ``J`` containing ``interval`` with ``|J| <= 6|I|``.

    Scales are searched from the smallest admissible ``|J|`` upwards, the
    unshifted grid first.
    """
    j_first = math.floor(-math.log2(interval.length))
    j_last = math.ceil(-math.log2(6 * interval.length))
    for j in range(j_first, j_last - 1, -1):
        if Fraction(2) ** (-j) > 6 * Fraction(interval.length):
            break
        for beta in GRID_SHIFTS:
            candidate = grid_interval(beta, j, interval.left)
            if candidate.covers(interval):
                return beta, candidate
    raise AccuracyFailure(f"no dyadic cover found for {interval}")


# Maximal operators.


@dataclass(frozen=True)
class MaximalSearch:
    """Scale window and interval mesh used by the maximal operators."""

    j_min: int
    j_max: int
    mesh_octaves: int = 20
    per_octave: int = 4
    v_alpha_octaves: int = 12

    def __post_init__(self) -> None:
        if self.j_min > self.j_max:
            raise InvalidParameter("dyadic scale window needs j_min <= j_max")
        if self.mesh_octaves < 1 or self.per_octave < 1 or self.v_alpha_octaves < 0:
            raise InvalidParameter("maximal search mesh must be nonempty")

    @classmethod
    def default(cls) -> "MaximalSearch":
        j_min, j_max = get_setting("DYADIC_SCALES")
        return cls(int(j_min), int(j_max))

    @classmethod
    def from_dict(cls, data: "dict[str, Any]") -> "MaximalSearch":
        default = cls.default()
        return cls(
            j_min=int(data.get("j_min", default.j_min)),
            j_max=int(data.get("j_max", default.j_max)),
            mesh_octaves=int(data.get("mesh_octaves", default.mesh_octaves)),
            per_octave=int(data.get("per_octave", default.per_octave)),
            v_alpha_octaves=int(data.get("v_alpha_octaves", default.v_alpha_octaves)),
        )


@dataclass(frozen=True)
class MaximalVariant:
    kind: str
    beta: Fraction = Fraction(0)
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in MAXIMAL_KINDS:
            raise InvalidParameter(
                f"unknown maximal operator {self.kind!r}; expected one of {list(MAXIMAL_KINDS)}"
            )
        object.__setattr__(self, "beta", as_shift(self.beta))
        if self.alpha <= -1:
            raise InvalidParameter(f"alpha must be > -1, got {self.alpha}")

    @classmethod
    def from_dict(cls, data: "dict[str, Any]") -> "MaximalVariant":
        return cls(
            kind=str(data.get("kind", "HL")),
            beta=data.get("beta", 0),
            alpha=float(data.get("alpha", 0.0)),
        )

    def as_dict(self) -> "dict[str, Any]":
        return {"kind": self.kind, "beta": str(self.beta), "alpha": self.alpha}


HL = MaximalVariant("HL")


@dataclass(frozen=True)
class MaximalValue:
    """
    Value of a maximal function at a point.

    ``lower_bound`` marks values that are a sup over a finite family and so
    can only underestimate; ``gap`` is the change seen on mesh refinement.
    """

    value: float
    lower_bound: bool
    gap: float = 0.0
    interval: "Optional[dict[str, Any]]" = None

    def as_dict(self) -> "dict[str, Any]":
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "gap": self.gap,
            "interval": self.interval,
        }


def _step_average_candidates(f: StepFunction, x: float) -> "tuple[float, tuple[float, float]]":
    best = 0.0
    where = (x, x)
    for a, b, v in f.pieces:
        if a <= x <= b and abs(v) > best:
            best, where = abs(v), (x, x)
    points = f.breakpoints
    lefts = [p for p in points if p <= x] + [x]
    rights = [p for p in points if p >= x] + [x]
    for a in lefts:
        for b in rights:
            if b > a:
                average = f.integral(a, b) / (b - a)
                if average > best:
                    best, where = average, (a, b)
    return best, where


def hl_maximal_of_step(f: StepFunction, x: float) -> float:
    """
    Exact Hardy-Littlewood maximal function of a step function at ``x``.

    Between breakpoints the average over ``[a, b]`` is monotone in each
    endpoint, so the sup is attained with endpoints at breakpoints or at ``x``.
    """
    return _step_average_candidates(f, float(x))[0]


@dataclass(frozen=True)
class HLMaximalOfStep(LineFunction):
    """``x -> M_HL(f)(x)`` for a step function ``f``."""

    base: StepFunction

    def __call__(self, x: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        values = [hl_maximal_of_step(self.base, float(p)) for p in x.ravel()]
        return np.asarray(values, dtype=float).reshape(x.shape)

    @property
    def breakpoints(self) -> "tuple[float, ...]":
        return self.base.breakpoints

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        support = self.base.support
        if support is None:
            return None
        center = (support[0] + support[1]) / 2
        half_width = (support[1] - support[0]) / 2
        return Envelope(2 * self.base.l1_norm, 1.0, center, 2 * half_width)

    def describe(self) -> "dict[str, Any]":
        return {"domain": self.domain, "kind": "hl_maximal", "base": self.base.describe()}


def _mesh_offsets(search: MaximalSearch, per_octave: int) -> "FloatArray":
    steps = np.arange(-search.mesh_octaves * per_octave, search.mesh_octaves * per_octave + 1)
    return np.concatenate([[0.0], 2.0 ** (steps / per_octave)])


def _hl_on_mesh(
    f: LineFunction, x: float, search: MaximalSearch, per_octave: int
) -> "tuple[float, tuple[float, float]]":
    offsets = _mesh_offsets(search, per_octave)
    points = np.concatenate([x - offsets[::-1], x + offsets[1:]])
    centre = len(offsets) - 1
    pieces = [f.integral(float(a), float(b)) for a, b in zip(points, points[1:])]
    cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
    lefts, rights = np.arange(centre + 1), np.arange(centre, len(points))
    mass = cumulative[rights][None, :] - cumulative[lefts][:, None]
    width = points[rights][None, :] - points[lefts][:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        averages = np.where(width > 0, mass / width, -np.inf)
    i, j = np.unravel_index(int(np.argmax(averages)), averages.shape)
    return float(averages[i, j]), (float(points[lefts[i]]), float(points[rights[j]]))


def _hl(f: LineFunction, x: float, search: MaximalSearch) -> MaximalValue:
    if isinstance(f, StepFunction):
        value, (a, b) = _step_average_candidates(f, x)
        return MaximalValue(value, lower_bound=False, interval={"left": a, "right": b})
    coarse, _ = _hl_on_mesh(f, x, search, search.per_octave)
    fine, (a, b) = _hl_on_mesh(f, x, search, 2 * search.per_octave)
    return MaximalValue(
        max(coarse, fine),
        lower_bound=True,
        gap=abs(fine - coarse),
        interval={"left": a, "right": b},
    )


def _hl_dyadic(f: LineFunction, x: float, beta: Fraction, search: MaximalSearch) -> MaximalValue:
    best, where = 0.0, None
    for j in range(search.j_min, search.j_max + 1):
        interval = grid_interval(beta, j, x)
        average = f.integral(float(interval.left), float(interval.right)) / float(interval.length)
        if average > best:
            best, where = average, interval
    return MaximalValue(best, lower_bound=False, interval=where.as_dict() if where else None)


def box_average(
    f: HalfPlaneFunction,
    interval: DyadicInterval,
    alpha: float,
    cfg: "Optional[QuadratureConfig]" = None,
) -> float:
    """``V_alpha`` average of ``|f|`` over the Carleson square of ``interval``."""
    left, right, length = float(interval.left), float(interval.right), float(interval.length)
    integrand = Integrand(
        func=f.modulus,
        center=(left + right) / 2,
        scale=length,
        support=Box(left, right, 0.0, length),
    )
    measure = LebesgueAlpha(alpha)
    return measure.integrate(integrand, cfg).value / box_volume(interval.as_interval(), alpha)


def _v_alpha_dyadic(
    f: HalfPlaneFunction,
    z: complex,
    beta: Fraction,
    alpha: float,
    search: MaximalSearch,
    cfg: "Optional[QuadratureConfig]" = None,
) -> MaximalValue:
    if z.imag <= 0:
        raise InvalidParameter(f"point {z} is not in the upper half-plane")
    j_top = math.floor(-math.log2(z.imag))
    if 2.0 ** (-j_top) <= z.imag:
        j_top -= 1
    j_top = min(j_top, search.j_max)
    best, where = 0.0, None
    for j in range(j_top, max(search.j_min, j_top - search.v_alpha_octaves) - 1, -1):
        interval = grid_interval(beta, j, z.real)
        average = box_average(f, interval, alpha, cfg)
        if average > best:
            best, where = average, interval
    return MaximalValue(best, lower_bound=True, interval=where.as_dict() if where else None)


def maximal_value(
    f: "Union[LineFunction, HalfPlaneFunction]",
    point: "Union[float, complex]",
    variant: MaximalVariant = HL,
    search: "Optional[MaximalSearch]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
) -> MaximalValue:
    search = search or MaximalSearch.default()
    if variant.kind == "V_alpha_dyadic":
        if not isinstance(f, HalfPlaneFunction):
            raise InvalidParameter("the V_alpha maximal operator acts on half-plane functions")
        return _v_alpha_dyadic(f, complex(point), variant.beta, variant.alpha, search, cfg)
    if not isinstance(f, LineFunction):
        raise InvalidParameter(f"the {variant.kind} maximal operator acts on line functions")
    x = float(point.real if isinstance(point, complex) else point)
    if variant.kind == "HL":
        return _hl(f, x, search)
    return _hl_dyadic(f, x, variant.beta, search)


# Domination checks.


@dataclass(frozen=True)
class DominationPoint:
    point: "Union[float, complex]"
    value: float
    maximal: float
    ratio: float

    def as_dict(self) -> "dict[str, Any]":
        point = self.point
        return {
            "point": [point.real, point.imag] if isinstance(point, complex) else point,
            "value": self.value,
            "maximal": self.maximal,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class DominationReport:
    points: "tuple[DominationPoint, ...]"
    constant: float
    parameters: "dict[str, Any]"

    @property
    def max_ratio(self) -> float:
        return max((p.ratio for p in self.points), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.constant * (1 + 1e-9)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "points": [p.as_dict() for p in self.points],
            "constant": self.constant,
            "max_ratio": self.max_ratio,
            "passed": self.passed,
            "parameters": self.parameters,
        }


def _ratio(value: float, bound: float) -> float:
    if value == 0:
        return 0.0
    return value / bound if bound > 0 else math.inf


def domination_check(
    f: LineFunction,
    points: "Iterable[float]",
    search: "Optional[MaximalSearch]" = None,
    threads: "Optional[int]" = None,
) -> DominationReport:
    """Sampled check of ``M_HL(f) <= 6 * sum_beta M^{D^beta}(f)``."""
    search = search or MaximalSearch.default()

    def check(x: float) -> DominationPoint:
        full = _hl(f, x, search).value
        dyadic = sum(_hl_dyadic(f, x, beta, search).value for beta in GRID_SHIFTS)
        return DominationPoint(x, full, dyadic, _ratio(full, dyadic))

    results = ordered_map(check, [float(x) for x in points], threads)
    return DominationReport(tuple(results), float(DOMINATION_FACTOR), {"operator": "HL"})


def domination_constant(alpha: float) -> float:
    """``(4/pi) * 12**(2 + alpha) * max(2**alpha, (2/3)**alpha) / (1 + alpha)``."""
    if alpha <= -1:
        raise InvalidParameter(f"alpha must be > -1, got {alpha}")
    return 4 / math.pi * 12 ** (2 + alpha) * max(2**alpha, (2 / 3) ** alpha) / (1 + alpha)


def pointwise_domination_check(
    f: HalfPlaneFunction,
    gamma: float,
    alpha: float,
    z_grid: "Iterable[complex]",
    search: "Optional[MaximalSearch]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    threads: "Optional[int]" = None,
) -> DominationReport:
    """
    Sampled check of ``|F(z)|**gamma <= C_alpha * M^{D^beta}_{V_alpha}(|F|**gamma)(z)``.

    The maximal function is the larger of the two grids; being a sup over
    finitely many boxes it underestimates, so reported ratios are upper bounds.
    """
    if gamma <= 0:
        raise InvalidParameter(f"gamma must be positive, got {gamma}")
    search = search or MaximalSearch.default()
    powered = PowerOf(f, gamma)

    def check(z: complex) -> DominationPoint:
        value = float(powered.at(z))
        maximal = max(
            _v_alpha_dyadic(powered, z, beta, alpha, search, cfg).value for beta in GRID_SHIFTS
        )
        return DominationPoint(z, value, maximal, _ratio(value, maximal))

    results = ordered_map(check, [complex(z) for z in z_grid], threads)
    return DominationReport(
        tuple(results),
        domination_constant(alpha),
        {"operator": "V_alpha_dyadic", "gamma": gamma, "alpha": alpha},
    )


# Weak-type profile.


@dataclass(frozen=True)
class LevelSetPoint:
    level: float
    measure: float
    bound: float
    slack: float
    violation: bool

    @property
    def relative_slack(self) -> float:
        return self.slack / self.bound if self.bound > 0 else 0.0

    def as_dict(self) -> "dict[str, Any]":
        return {
            "lambda": self.level,
            "measure": self.measure,
            "bound": self.bound,
            "slack": self.slack,
            "relative_slack": self.relative_slack,
            "violation": self.violation,
        }


@dataclass(frozen=True)
class WeakTypeProfile:
    points: "tuple[LevelSetPoint, ...]"
    norm: float
    gamma: float
    beta: Fraction
    depth: int

    @property
    def passed(self) -> bool:
        return not any(p.violation for p in self.points)

    @property
    def max_relative_slack(self) -> float:
        return max((p.relative_slack for p in self.points), default=0.0)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "points": [p.as_dict() for p in self.points],
            "norm": self.norm,
            "gamma": self.gamma,
            "beta": str(self.beta),
            "depth": self.depth,
            "passed": self.passed,
            "max_relative_slack": self.max_relative_slack,
        }


def _cumulative(g: LineFunction, edges: "FloatArray") -> "FloatArray":
    if isinstance(g, StepFunction):
        total = np.zeros_like(edges)
        for a, b, v in g.pieces:
            total += abs(v) * np.clip(edges - a, 0.0, b - a)
        return total
    pieces = [g.integral(float(a), float(b)) for a, b in zip(edges, edges[1:])]
    return np.concatenate([[0.0], np.cumsum(pieces)])


def _tree_maxima(leaf_mass: "FloatArray", leaf_length: float, depth: int) -> "list[FloatArray]":
    """Maximal averages over ancestors, level by level from the top down."""
    maxima = [np.array([leaf_mass.sum() / (leaf_length * 2**depth)])]
    for level in range(1, depth + 1):
        width = 2 ** (depth - level)
        averages = leaf_mass.reshape(-1, width).sum(axis=1) / (leaf_length * width)
        maxima.append(np.maximum(np.repeat(maxima[-1], 2), averages))
    return maxima


def _outside_measure(total: float, top_length: float, level: float) -> float:
    """Level-set measure outside the top interval, from its ancestors."""
    average = total / top_length
    if average <= level:
        return 0.0
    k = 0
    while average / 2 ** (k + 1) > level:
        k += 1
    return (2**k - 1) * top_length


def weak_type_profile(
    f: LineFunction,
    phi: "GrowthFunction",
    gamma: float,
    lambdas: "Optional[Sequence[float]]" = None,
    beta: "Any" = 0,
    depth: int = 12,
) -> WeakTypeProfile:
    """
    Level sets of ``(M^{D^beta}((|f|/||f||)**(1/gamma)))**gamma`` against ``1/phi(lambda)``.

    Inside the smallest grid interval holding the support, the maximal
    function is evaluated on ``2**depth`` leaves; outside it is exact. The
    slack is the change from ``depth - 1`` to ``depth``.
    """
    indices = estimate_indices(phi)
    if gamma * indices.lower < 1:
        raise InvalidParameter(
            f"weak-type profile needs phi(t**gamma) convex: gamma*a_phi = "
            f"{gamma * indices.lower:.6g} < 1"
        )
    if f.support is None:
        raise InvalidParameter("weak-type profile needs a compactly supported function")
    if depth < 2:
        raise InvalidParameter("leaf depth must be at least 2")
    beta = as_shift(beta)
    levels = lambda_grid(lambdas)
    norm = luxemburg_norm(f, phi).norm
    if norm == 0:
        points = tuple(
            LevelSetPoint(float(lam), 0.0, 1 / float(phi.value(lam)), 0.0, False) for lam in levels
        )
        return WeakTypeProfile(points, 0.0, gamma, beta, depth)

    def normalise(u: "Any") -> "Any":
        return np.power(np.abs(u) / norm, 1 / gamma)

    g: LineFunction
    if isinstance(f, StepFunction):
        g = f.map_values(lambda v: float(normalise(v)))
    else:
        g = MappedLineFunction(f, normalise)
    top = enclosing(beta, Interval.from_endpoints(*f.support))
    left, length = float(top.left), float(top.length)
    leaf_length = length / 2**depth
    edges = left + leaf_length * np.arange(2**depth + 1)
    leaf_mass = np.diff(_cumulative(g, edges))
    maxima = _tree_maxima(leaf_mass, leaf_length, depth)
    fine, coarse = maxima[-1], maxima[-2]
    total = float(leaf_mass.sum())

    points = []
    for lam in levels:
        threshold = float(lam) ** (1 / gamma)
        outside = _outside_measure(total, length, threshold)
        measure = leaf_length * int(np.count_nonzero(fine > threshold)) + outside
        rough = 2 * leaf_length * int(np.count_nonzero(coarse > threshold)) + outside
        bound = 1 / float(phi.value(float(lam)))
        slack = abs(measure - rough)
        violation = measure > (bound + slack) * (1 + 1e-12)
        if violation:
            logger.warning("weak-type bound exceeded at lambda=%g: %g > %g", lam, measure, bound)
        points.append(LevelSetPoint(float(lam), measure, bound, slack, violation))
    return WeakTypeProfile(tuple(points), norm, gamma, beta, depth)


# Boundedness of M_HL between Orlicz spaces.


def indicator_family(
    exponents: "Sequence[float]" = tuple(k / 2 for k in range(-8, 9)),
) -> "list[StepFunction]":
    """Indicators of ``[0, 10**e)``."""
    return [StepFunction.indicator(0.0, 10.0**e) for e in exponents]


@dataclass(frozen=True)
class MaximalBoundMember:
    length: float
    source_norm: float
    maximal_norm: float

    @property
    def ratio(self) -> float:
        return self.maximal_norm / self.source_norm

    def as_dict(self) -> "dict[str, Any]":
        ratio = self.ratio
        return {
            "length": self.length,
            "source_norm": self.source_norm,
            "maximal_norm": self.maximal_norm if math.isfinite(self.maximal_norm) else None,
            "ratio": ratio if math.isfinite(ratio) else None,
        }


@dataclass(frozen=True)
class MaximalBoundVerdict:
    dini: "DiniResult"
    members: "tuple[MaximalBoundMember, ...]"
    empirical: str

    @property
    def passed(self) -> bool:
        return self.dini.holds

    @property
    def agree(self) -> bool:
        if self.passed:
            return self.empirical != trends.UNBOUNDED_TREND
        return self.empirical != trends.BOUNDED

    def as_dict(self) -> "dict[str, Any]":
        return {
            "passed": self.passed,
            "dini": self.dini.as_dict(),
            "members": [m.as_dict() for m in self.members],
            "empirical": self.empirical,
            "agree": self.agree,
        }


def maximal_bound_test(
    phi1: "GrowthFunction",
    phi2: "GrowthFunction",
    family: "Optional[Sequence[StepFunction]]" = None,
    variant: MaximalVariant = HL,
    grid: "Optional[ScanGrid]" = None,
    threads: "Optional[int]" = None,
) -> MaximalBoundVerdict:
    """
    Whether ``M_HL`` maps ``L^phi1`` into ``L^phi2``.

    The verdict is the Dini condition; the ratios ``||M f|| / ||f||`` over
    the witness family corroborate it and must not point the other way.
    """
    if variant.kind != "HL":
        raise InvalidParameter("the boundedness test uses the full Hardy-Littlewood operator")
    for name, phi in (("phi1", phi1), ("phi2", phi2)):
        if estimate_indices(phi, grid).lower < 1 - 1e-12:
            raise PreconditionViolation(f"{name} in U", f"{name} = {phi} has lower index < 1")
    dini = dini_constant(phi1, phi2, grid)
    members = family if family is not None else indicator_family()

    def measure(f: StepFunction) -> MaximalBoundMember:
        support = f.support
        assert support is not None
        source = luxemburg_norm(f, phi1, tol=1e-9).norm
        maximal = luxemburg_norm(HLMaximalOfStep(f), phi2, tol=1e-9).norm
        logger.debug("maximal ratio on length %g: %g", support[1] - support[0], maximal / source)
        return MaximalBoundMember(support[1] - support[0], source, maximal)

    results = ordered_map(measure, members, threads)
    ratios = [m.ratio for m in results]
    empirical, _ = trends.classify_trend(
        [m.length for m in results],
        ratios,
        divergent=any(not math.isfinite(r) for r in ratios),
    )
    return MaximalBoundVerdict(dini, tuple(results), empirical)
