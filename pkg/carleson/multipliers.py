"""
Multiplier windows and the regimes they determine.

A pair of growth functions with source exponent ``s`` (1 for Hardy-Orlicz,
``2 + alpha`` for Bergman-Orlicz) and target exponent ``2 + beta`` defines

    omega(t) = phi2^-1(1/t**target) / phi1^-1(1/t**source),

and pointwise multipliers between the spaces are governed by how ``omega``
behaves: bounded above and below (bounded multipliers), tending to zero at the
boundary (only the zero multiplier), or a genuine growth window when the
indices separate.
"""

import logging
import math

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from carleson import trends
from carleson.conf import get_setting
from carleson.exceptions import (
    AccuracyFailure,
    DomainError,
    InvalidParameter,
    RangeError,
)
from carleson.functions import ProductFunction
from carleson.grids import HalfPlaneGrid, ScanGrid
from carleson.growth import estimate_indices, invert, quotient_monotone
from carleson.norms import luxemburg_norm
from carleson.parallel import ordered_map
from carleson.quadrature import LebesgueAlpha
from carleson.reports import Report, to_json_value


if TYPE_CHECKING:
    from typing import Any, Optional, Sequence

    from carleson.functions import HalfPlaneFunction
    from carleson.growth import GrowthFunction
    from carleson.quadrature import QuadratureConfig
    from carleson.typing import FloatArray, RenderContext
    from carleson.witnesses import WitnessContext


logger = logging.getLogger(__name__)

H_INFINITY = "H_infinity"
H_OMEGA_INFINITY = "H_omega_infinity"
ZERO_ONLY = "zero_only"
INDETERMINATE = "indeterminate"

REGIMES = (H_OMEGA_INFINITY, H_INFINITY, ZERO_ONLY, INDETERMINATE)

ZERO_LIMIT_PROXY = (
    "omega increasing on the grid with omega(t_min) < ratio * omega(t_mid) "
    "or a steady log-log slope >= slope_limit near t_min; "
    "limits are not computable from samples"
)

# The low-end slope must keep this share of the slope up to t_mid; a fading
# slope means omega levels off instead of vanishing.
STEADY_SLOPE_SHARE = 0.5

# The zero-at-zero reading of the decreasing-and-vanishing regime: a positive
# decreasing function cannot tend to 0 at 0.
ZERO_LIMIT_READING = "omega -> 0 as t -> 0"


@dataclass(frozen=True)
class OmegaWindow:
    phi1: "GrowthFunction"
    phi2: "GrowthFunction"
    source: float
    target: float

    def __post_init__(self) -> None:
        if not (self.source > 0 and self.target > 0):
            raise InvalidParameter("window exponents must be positive")

    @classmethod
    def hardy(
        cls, phi1: "GrowthFunction", phi2: "GrowthFunction", alpha: float = 0.0
    ) -> "OmegaWindow":
        """Hardy-Orlicz source, Bergman-Orlicz ``A_alpha`` target."""
        if alpha <= -1:
            raise InvalidParameter(f"alpha must be > -1, got {alpha}")
        return cls(phi1, phi2, 1.0, 2 + alpha)

    @classmethod
    def bergman(
        cls,
        phi1: "GrowthFunction",
        phi2: "GrowthFunction",
        alpha: float = 0.0,
        beta: float = 0.0,
    ) -> "OmegaWindow":
        if alpha <= -1 or beta <= -1:
            raise InvalidParameter(f"alpha and beta must be > -1, got {alpha}, {beta}")
        return cls(phi1, phi2, 2 + alpha, 2 + beta)

    def __call__(self, t: "FloatArray") -> "FloatArray":
        t = np.asarray(t, dtype=float)
        upper = np.asarray(self.phi2.inverse(t**-self.target), dtype=float)
        lower = np.asarray(self.phi1.inverse(t**-self.source), dtype=float)
        return upper / lower

    def as_dict(self) -> "dict[str, Any]":
        return {
            "phi1": self.phi1.describe(),
            "phi2": self.phi2.describe(),
            "source": self.source,
            "target": self.target,
        }


def omega_eval(window: OmegaWindow, t: float) -> float:
    """``omega(t)`` with residual-checked inversions."""
    t = float(t)
    if not t > 0 or not math.isfinite(t):
        raise DomainError(f"omega is defined for t > 0, got {t}")
    upper = invert(window.phi2, t**-window.target)
    lower = invert(window.phi1, t**-window.source)
    return upper / lower


def omega_samples(
    window: OmegaWindow, grid: "Optional[ScanGrid]" = None
) -> "tuple[FloatArray, FloatArray]":
    """
    ``(t, omega(t))`` on the grid.

    Points where an inversion leaves its bracket are dropped, so the returned
    grid can be shorter than requested.
    """
    grid = grid or ScanGrid.from_dict(get_setting("REGIME_GRID"))
    ts = grid.values()
    try:
        return ts, window(ts)
    except RangeError:
        pass
    kept, values = [], []
    for t in ts:
        try:
            values.append(float(window(np.asarray(t))))
        except RangeError:
            continue
        kept.append(t)
    if len(kept) < 2:
        raise RangeError("omega could not be sampled on the grid", (grid.t_min, grid.t_max))
    logger.info("omega sampled on %d of %d grid points", len(kept), len(ts))
    return np.asarray(kept), np.asarray(values)


class RegimeReport(Report):
    template_name = "carleson/reports/regime.txt"

    def __init__(
        self,
        regime: str,
        window: OmegaWindow,
        ts: "FloatArray",
        omegas: "FloatArray",
        diagnostics: "dict[str, bool]",
        details: "dict[str, Any]",
    ) -> None:
        self.regime = regime
        self.window = window
        self.ts = ts
        self.omegas = omegas
        self.diagnostics = diagnostics
        self.details = details

    def as_dict(self) -> "dict[str, Any]":
        return {
            "regime": self.regime,
            "window": self.window.as_dict(),
            "omega_samples": [[float(t), float(w)] for t, w in zip(self.ts, self.omegas)],
            "diagnostics": self.diagnostics,
            "details": self.details,
        }

    def get_context_data(
        self, parent_context: "Optional[RenderContext]" = None
    ) -> "Optional[RenderContext]":
        return {"regime": self.regime, "diagnostics": sorted(self.diagnostics.items())}


def _log_slope(ts: "FloatArray", omegas: "FloatArray", upto: float) -> float:
    """Log-log slope of omega from ``ts[0]`` to the first sample at or above ``upto``."""
    k = max(int(np.searchsorted(ts, upto)), 1)
    k = min(k, len(ts) - 1)
    return float(np.log(omegas[k] / omegas[0]) / np.log(ts[k] / ts[0]))


def regime_classify(
    phi1: "GrowthFunction",
    phi2: "GrowthFunction",
    source: float = 1.0,
    target: float = 2.0,
    grid: "Optional[ScanGrid]" = None,
) -> RegimeReport:
    """
    Classify the multiplier regime of a window from samples of ``omega``.

    Checks run in order: ``zero_only`` (omega vanishes at the boundary),
    ``H_infinity`` (omega within ``[c, 1/c]``), ``H_omega_infinity`` (the
    upper index of ``phi1`` lies below the lower index of ``phi2``). The
    first that holds wins; all three diagnostics are reported.

    omega vanishes at the boundary when it increases on the grid and either
    drops below ``ZERO_LIMIT_RATIO`` of its mid-grid value at ``t_min`` or
    keeps a steady log-log slope of at least ``ZERO_LIMIT_SLOPE`` over the
    lowest ``TREND_DECADES`` decades. An increasing omega with a fading slope
    is neither vanishing nor a growth window, and classifies as
    ``indeterminate``.
    """
    window = OmegaWindow(phi1, phi2, source, target)
    grid = grid or ScanGrid.from_dict(get_setting("REGIME_GRID"))
    c = float(get_setting("OMEGA_APPROX_CONSTANT"))
    ratio_limit = float(get_setting("ZERO_LIMIT_RATIO"))
    slope_limit = float(get_setting("ZERO_LIMIT_SLOPE"))
    decades = float(get_setting("TREND_DECADES"))

    quotient = quotient_monotone(phi1, phi2)
    ts, omegas = omega_samples(window, grid)
    mid = float(np.sqrt(grid.t_min * grid.t_max))
    omega_mid = float(np.interp(np.log(mid), np.log(ts), omegas))
    steps = np.diff(omegas) / omegas[:-1]
    increasing = bool(np.all(steps >= -1e-9))
    monotone = increasing or bool(np.all(steps <= 1e-9))
    zero_ratio = float(omegas[0] / omega_mid) if omega_mid > 0 else math.inf
    low_slope = _log_slope(ts, omegas, ts[0] * 10**decades)
    half_slope = _log_slope(ts, omegas, mid)
    steady = low_slope >= slope_limit and low_slope >= STEADY_SLOPE_SHARE * half_slope
    vanishing = increasing and (zero_ratio < ratio_limit or steady)
    first, second = estimate_indices(phi1), estimate_indices(phi2)

    diagnostics = {
        "zero_limit": vanishing,
        "approximately_one": bool(np.all((omegas >= c) & (omegas <= 1 / c))),
        "index_gap": first.upper < second.lower,
    }
    if not quotient.passed:
        regime = INDETERMINATE
    elif diagnostics["zero_limit"]:
        regime = ZERO_ONLY
    elif diagnostics["approximately_one"]:
        regime = H_INFINITY
    elif diagnostics["index_gap"] and not (increasing and low_slope > 0):
        regime = H_OMEGA_INFINITY
    else:
        regime = INDETERMINATE
    logger.debug("regime %s with diagnostics %s", regime, diagnostics)
    details = {
        "quotient_monotone": quotient.as_dict(),
        "omega_range": [float(omegas.min()), float(omegas.max())],
        "approx_constant": c,
        "zero_ratio": zero_ratio,
        "zero_ratio_limit": ratio_limit,
        "low_slope": low_slope,
        "half_slope": half_slope,
        "slope_limit": slope_limit,
        "t_mid": mid,
        "monotone": monotone,
        "increasing": increasing,
        "phi1_upper_index": first.upper,
        "phi2_lower_index": second.lower,
        "zero_limit_proxy": ZERO_LIMIT_PROXY,
        "zero_limit_reading": ZERO_LIMIT_READING,
    }
    return RegimeReport(regime, window, ts, omegas, diagnostics, details)


@dataclass(frozen=True)
class HOmegaNorm:
    value: float
    location: "Optional[complex]"
    lower_bound: bool = True

    def as_dict(self) -> "dict[str, Any]":
        return {
            "value": self.value,
            "location": self.location,
            "lower_bound": self.lower_bound,
        }


def h_omega_norm(
    f: "HalfPlaneFunction", window: OmegaWindow, z_grid: "Optional[HalfPlaneGrid]" = None
) -> HOmegaNorm:
    """Grid sup of ``|f(z)| / omega(Im z)``, a lower bound of the true norm."""
    z_grid = z_grid or HalfPlaneGrid.default()
    best, where = 0.0, None
    for z in z_grid.points():
        value = f.at(z) / omega_eval(window, z.imag)
        if value > best:
            best, where = value, z
    return HOmegaNorm(best, where)


class MultiplierReport(Report):
    def __init__(
        self,
        norms: "Sequence[tuple[str, Optional[float], float]]",
        verdict: str,
        pointwise: "Optional[HOmegaNorm]",
        parameters: "dict[str, Any]",
    ) -> None:
        self.norms = list(norms)
        self.verdict = verdict
        self.pointwise = pointwise
        self.parameters = parameters

    @property
    def max_norm(self) -> float:
        return max((norm for _, _, norm in self.norms), default=0.0)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "max_norm": self.max_norm,
            "verdict": self.verdict,
            "norms": [
                {"id": member, "parameter": parameter, "norm": norm}
                for member, parameter, norm in self.norms
            ],
            "h_omega_constant": None if self.pointwise is None else self.pointwise.as_dict(),
            "parameters": to_json_value(self.parameters),
        }


def multiplier_product_test(
    g: "HalfPlaneFunction",
    family: "Sequence[tuple[str, Optional[float], HalfPlaneFunction]]",
    phi2: "GrowthFunction",
    target: "WitnessContext",
    window: "Optional[OmegaWindow]" = None,
    z_grid: "Optional[HalfPlaneGrid]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    threads: "Optional[int]" = None,
) -> MultiplierReport:
    """
    Target-space norms of ``g * F`` over a family of unit-ball witnesses ``F``.

    Family members are ``(id, trend parameter, witness)``. Norms that grow
    monotonically along the parameter flag ``g`` as a non-multiplier. With a
    ``window`` the implied ``H_omega^infinity`` constant of ``g`` is reported.
    """
    if target.kind != "bergman":
        raise InvalidParameter("multiplier targets are Bergman-Orlicz spaces")
    measure = LebesgueAlpha(target.alpha)

    def product_norm(member: "tuple[str, Optional[float], HalfPlaneFunction]") -> "tuple[str, Optional[float], float]":
        member_id, parameter, witness = member
        if g.is_zero:
            return member_id, parameter, 0.0
        try:
            result = luxemburg_norm(ProductFunction(g, witness), phi2, measure, cfg=cfg)
        except AccuracyFailure as exc:
            logger.warning("member %s excluded: %s", member_id, exc)
            return member_id, parameter, math.nan
        return member_id, parameter, result.norm

    norms = ordered_map(product_norm, sorted(family, key=lambda m: m[0]), threads)
    params = [p for _, p, _ in norms if p is not None]
    values = [v for _, p, v in norms if p is not None]
    divergent = any(math.isinf(v) for _, _, v in norms)
    trend, _ = trends.classify_trend(params, values, divergent=divergent)
    verdict = {
        trends.BOUNDED: "multiplier-consistent",
        trends.UNBOUNDED_TREND: "non-multiplier",
    }.get(trend, trends.INCONCLUSIVE)
    pointwise = None if window is None else h_omega_norm(g, window, z_grid)
    return MultiplierReport(
        norms,
        verdict,
        pointwise,
        {
            "phi2": phi2.describe(),
            "target": target.as_dict(),
            "window": None if window is None else window.as_dict(),
        },
    )
