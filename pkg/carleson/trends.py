"""
Trend detection on sampled families.

A finite grid can never prove that a quantity is unbounded. The rule used
throughout is deliberately narrow: a family shows an unbounded trend only when
its values grow strictly monotonically by at least ``TREND_FACTOR`` across the
outermost ``TREND_DECADES`` decades of the probe parameter, at either end.
Growth by that factor without monotonicity is reported as inconclusive.
"""

import logging

from typing import TYPE_CHECKING

import numpy as np

from carleson.conf import get_setting


if TYPE_CHECKING:
    from typing import Optional, Sequence

    from carleson.typing import FloatArray


logger = logging.getLogger(__name__)

BOUNDED = "bounded"
UNBOUNDED_TREND = "unbounded-trend"
INCONCLUSIVE = "inconclusive"

GROWING = "growing"
ROUGH = "rough"
FLAT = "flat"


def _collapse(
    params: "Sequence[float] | FloatArray", values: "Sequence[float] | FloatArray"
) -> "tuple[FloatArray, FloatArray]":
    """Sort by parameter and keep the largest value per distinct parameter."""
    p = np.asarray(params, dtype=float)
    v = np.asarray(values, dtype=float)
    keep = np.isfinite(p) & (p > 0) & ~np.isnan(v)
    p, v = p[keep], v[keep]
    unique = np.unique(p)
    collapsed = np.array([v[p == u].max() for u in unique])
    return unique, collapsed


def end_behaviour(sequence: "FloatArray", factor: float) -> str:
    """Classify a sequence ordered from the interior outwards."""
    if len(sequence) < 3:
        return FLAT
    if np.any(np.isinf(sequence)):
        return GROWING
    grew = sequence[-1] >= factor * sequence[0] and sequence[-1] > 0
    if not grew:
        return FLAT
    return GROWING if bool(np.all(np.diff(sequence) > 0)) else ROUGH


def end_behaviours(
    params: "Sequence[float] | FloatArray",
    values: "Sequence[float] | FloatArray",
    factor: "Optional[float]" = None,
    decades: "Optional[float]" = None,
) -> "dict[str, str]":
    """Return the behaviour towards the ``low`` and ``high`` ends of the parameter."""
    factor = get_setting("TREND_FACTOR") if factor is None else factor
    decades = get_setting("TREND_DECADES") if decades is None else decades
    p, v = _collapse(params, values)
    if len(p) == 0:
        return {"low": FLAT, "high": FLAT}
    logp = np.log10(p)
    high = v[logp >= logp[-1] - decades - 1e-12]
    low = v[logp <= logp[0] + decades + 1e-12][::-1]
    return {
        "low": end_behaviour(low, factor),
        "high": end_behaviour(high, factor),
    }


def unbounded_direction(
    params: "Sequence[float] | FloatArray",
    values: "Sequence[float] | FloatArray",
    factor: "Optional[float]" = None,
    decades: "Optional[float]" = None,
) -> "Optional[str]":
    """Return ``"low"`` or ``"high"`` for an end with an unbounded trend, else None."""
    behaviours = end_behaviours(params, values, factor, decades)
    for end in ("low", "high"):
        if behaviours[end] == GROWING:
            return end
    return None


def classify_trend(
    params: "Sequence[float] | FloatArray",
    values: "Sequence[float] | FloatArray",
    divergent: bool = False,
) -> "tuple[str, Optional[str]]":
    """
    Return the verdict of a sampled family and the end an unbounded trend was seen at.

    ``divergent`` marks families where some member is certified infinite (its
    integrand fails the envelope integrability test); they are unbounded outright.
    """
    if divergent:
        return UNBOUNDED_TREND, None
    v = np.asarray(values, dtype=float)
    if v.size == 0 or not np.any(np.isfinite(v)):
        return INCONCLUSIVE, None
    behaviours = end_behaviours(params, values)
    for end in ("low", "high"):
        if behaviours[end] == GROWING:
            return UNBOUNDED_TREND, end
    if ROUGH in behaviours.values():
        logger.debug("large non-monotone growth in probe family: %s", behaviours)
        return INCONCLUSIVE, None
    if not np.all(np.isfinite(v)):
        return INCONCLUSIVE, None
    return BOUNDED, None
