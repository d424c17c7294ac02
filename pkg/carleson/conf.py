"""
Package defaults.

Each default can be overridden by a Django setting of the same name with a
``CARLESON_`` prefix, e.g. ``CARLESON_SCAN_GRID``. When Django settings are not
configured (plain library use) the defaults apply.
"""

from typing import Any

from django.conf import settings


DEFAULTS: "dict[str, Any]" = {
    "SCAN_GRID": {"t_min": 1e-6, "t_max": 1e6, "points": 512},
    "INVERSION_BRACKET": (1e-12, 1e12),
    "INVERSION_RTOL": 1e-12,
    "QUADRATURE": {
        "abs_tol": 1e-12,
        "rel_tol": 1e-8,
        "max_subdivisions": 4000,
        "order": 10,
    },
    "DYADIC_SCALES": (-40, 40),
    "PROBE_LENGTH_EXPONENTS": (-20, 10),
    "PROBE_CENTERS": (0.0, 1.0, -1.0, 10.0, -10.0),
    "Z_GRID_Y_EXPONENTS": (-15, 15),
    "Z_GRID_X": (0.0, 5.0, -5.0),
    "OMEGA_APPROX_CONSTANT": 0.5,
    "ZERO_LIMIT_RATIO": 1e-3,
    "ZERO_LIMIT_SLOPE": 1e-2,
    "REGIME_GRID": {"t_min": 1e-24, "t_max": 1e8, "points": 257},
    "TREND_FACTOR": 2.0,
    "TREND_DECADES": 2.0,
    "THREADS": 1,
}


def get_setting(name: str) -> Any:
    if name not in DEFAULTS:
        raise KeyError(f"Unknown carleson setting: {name}")
    if not settings.configured:
        return DEFAULTS[name]
    return getattr(settings, f"CARLESON_{name}", DEFAULTS[name])
