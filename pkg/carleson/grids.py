"""Sampling grids shared by the scans, probe families and witness families."""

import math

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from carleson.conf import get_setting
from carleson.exceptions import InvalidInput, InvalidParameter


if TYPE_CHECKING:
    from typing import Any, Mapping, Optional

    from carleson.typing import FloatArray


def _finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(value):
        raise InvalidInput(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ScanGrid:
    """Log-spaced grid on ``[t_min, t_max]``."""

    t_min: float
    t_max: float
    points: int

    def __post_init__(self) -> None:
        t_min = _finite("t_min", self.t_min)
        t_max = _finite("t_max", self.t_max)
        if t_min <= 0 or t_max <= t_min:
            raise InvalidParameter(
                f"scan grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]"
            )
        if int(self.points) != self.points or self.points < 2:
            raise InvalidParameter(f"scan grid needs at least 2 points, got {self.points}")
        object.__setattr__(self, "t_min", t_min)
        object.__setattr__(self, "t_max", t_max)
        object.__setattr__(self, "points", int(self.points))

    @classmethod
    def from_dict(cls, data: "Mapping[str, Any]") -> "ScanGrid":
        try:
            return cls(data["t_min"], data["t_max"], data["points"])
        except KeyError as exc:
            raise InvalidInput(f"scan grid is missing {exc.args[0]!r}") from exc

    @classmethod
    def default(cls) -> "ScanGrid":
        return cls.from_dict(get_setting("SCAN_GRID"))

    @property
    def decades(self) -> float:
        return math.log10(self.t_max / self.t_min)

    def values(self) -> "FloatArray":
        return np.geomspace(self.t_min, self.t_max, self.points)

    def require_index_resolution(self) -> None:
        """Raise unless the grid is fine and wide enough to estimate indices."""
        if self.points < 100 or self.decades < 8 - 1e-9:
            raise InvalidParameter(
                "index estimation needs at least 100 points spanning 8 decades, "
                f"got {self.points} points over {self.decades:.3g} decades"
            )

    def as_dict(self) -> "dict[str, Any]":
        return {"t_min": self.t_min, "t_max": self.t_max, "points": self.points}


@dataclass(frozen=True)
class HalfPlaneGrid:
    """Product grid of points ``x + iy`` in the upper half-plane."""

    xs: "tuple[float, ...]"
    ys: "tuple[float, ...]"

    def __post_init__(self) -> None:
        xs = tuple(_finite("x", x) for x in self.xs)
        ys = tuple(_finite("y", y) for y in self.ys)
        if not xs or not ys:
            raise InvalidParameter("half-plane grid needs at least one x and one y")
        if min(ys) <= 0:
            raise InvalidParameter("half-plane grid heights must be positive")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", tuple(sorted(set(ys))))

    @classmethod
    def dyadic(
        cls,
        y_exponents: "tuple[int, int]",
        xs: "tuple[float, ...]" = (0.0,),
    ) -> "HalfPlaneGrid":
        lo, hi = y_exponents
        return cls(tuple(xs), tuple(2.0**k for k in range(int(lo), int(hi) + 1)))

    @classmethod
    def default(cls) -> "HalfPlaneGrid":
        return cls.dyadic(get_setting("Z_GRID_Y_EXPONENTS"), get_setting("Z_GRID_X"))

    @classmethod
    def from_dict(cls, data: "Mapping[str, Any]") -> "HalfPlaneGrid":
        xs = tuple(data.get("x", (0.0,)))
        if "y" in data:
            return cls(xs, tuple(data["y"]))
        if "y_exponents" in data:
            return cls.dyadic(tuple(data["y_exponents"]), xs)  # type: ignore[arg-type]
        raise InvalidInput("half-plane grid needs 'y' or 'y_exponents'")

    def points(self) -> "list[complex]":
        return [complex(x, y) for y in self.ys for x in self.xs]

    def as_dict(self) -> "dict[str, Any]":
        return {"x": list(self.xs), "y": list(self.ys)}


@dataclass(frozen=True)
class ProbeFamily:
    """Intervals with lengths ``2**k`` for ``k`` in ``length_exponents``."""

    length_exponents: "tuple[int, int]"
    centers: "tuple[float, ...]"

    def __post_init__(self) -> None:
        lo, hi = (int(k) for k in self.length_exponents)
        if hi < lo:
            raise InvalidParameter("probe length exponents must be increasing")
        if not self.centers:
            raise InvalidParameter("probe family needs at least one center")
        object.__setattr__(self, "length_exponents", (lo, hi))
        object.__setattr__(
            self, "centers", tuple(_finite("center", c) for c in self.centers)
        )

    @classmethod
    def default(cls) -> "ProbeFamily":
        return cls(
            tuple(get_setting("PROBE_LENGTH_EXPONENTS")),  # type: ignore[arg-type]
            tuple(get_setting("PROBE_CENTERS")),
        )

    @classmethod
    def from_dict(cls, data: "Mapping[str, Any]") -> "ProbeFamily":
        default = cls.default()
        return cls(
            tuple(data.get("length_exponents", default.length_exponents)),  # type: ignore[arg-type]
            tuple(data.get("centers", default.centers)),
        )

    def members(self) -> "list[tuple[str, float, float]]":
        """Return ``(probe id, center, length)`` triples sorted by probe id."""
        lo, hi = self.length_exponents
        members = [
            (f"c{center:+g}/k{k:+03d}", center, 2.0**k)
            for center in self.centers
            for k in range(lo, hi + 1)
        ]
        return sorted(members)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "length_exponents": list(self.length_exponents),
            "centers": list(self.centers),
        }


def log_grid(lo: float, hi: float, points: int) -> "FloatArray":
    return ScanGrid(lo, hi, points).values()


def log_mesh(lo: float, hi: float, points: int) -> "tuple[FloatArray, FloatArray]":
    """Return the ``ij``-indexed 2-D mesh of a log grid with itself."""
    values = log_grid(lo, hi, points)
    s, t = np.meshgrid(values, values, indexing="ij")
    return s, t


def lambda_grid(data: "Optional[Any]" = None) -> "FloatArray":
    """Log grid of levels, 25 points on ``[1e-3, 1e3]`` unless configured."""
    if data is None:
        return log_grid(1e-3, 1e3, 25)
    if isinstance(data, dict):
        return ScanGrid.from_dict(data).values()
    values = np.asarray([_finite("lambda", v) for v in data], dtype=float)
    if np.any(values <= 0):
        raise InvalidParameter("levels must be positive")
    return np.sort(values)
