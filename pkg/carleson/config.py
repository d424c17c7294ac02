"""
Run configuration.

A run is described by one JSON document. Growth functions, measures,
witnesses and grids are plain records turned into domain objects here::

    {
        "phi1": {"kind": "power", "p": 2},
        "phi2": {"kind": "power", "p": 4},
        "measure": {"kind": "lebesgue_alpha", "alpha": 0},
        "s": 1,
        "grids": {"z": {"y_exponents": [-4, 4], "x": [0]}}
    }

Unknown keys are ignored. Missing required keys and malformed values raise
:class:`~carleson.exceptions.InvalidInput`.
"""

import json
import logging
import math

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from carleson.certify import canonical_measure
from carleson.exceptions import CarlesonError, InvalidInput
from carleson.expressions import LINE_VARIABLES, PLANE_VARIABLES, parse_expression
from carleson.functions import (
    ConstantFunction,
    ExpressionHalfPlaneFunction,
    ExpressionLineFunction,
    StepFunction,
)
from carleson.grids import HalfPlaneGrid, ProbeFamily, ScanGrid, lambda_grid
from carleson.growth import PiecewisePower, Power, PowerLog, Tabulated, transform
from carleson.quadrature import Atomic, Density, Envelope, LebesgueAlpha, QuadratureConfig
from carleson.witnesses import (
    PoissonWitness,
    PowerWitness,
    WitnessContext,
    bergman_test,
    hardy_test,
)


if TYPE_CHECKING:
    from typing import Any, Callable, Mapping, Optional

    from carleson.functions import HalfPlaneFunction, LineFunction
    from carleson.growth import GrowthFunction
    from carleson.quadrature import Measure
    from carleson.typing import FloatArray


logger = logging.getLogger(__name__)


def _require(record: "Mapping[str, Any]", key: str, what: str) -> "Any":
    if not isinstance(record, dict):
        raise InvalidInput(f"{what} must be an object, got {record!r}")
    try:
        return record[key]
    except KeyError:
        raise InvalidInput(f"{what} is missing {key!r}") from None


def _number(value: "Any", what: str) -> float:
    if isinstance(value, bool):
        raise InvalidInput(f"{what} must be a number, got {value!r}")
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidInput(f"{what} must be a number, got {value!r}") from None
    if not math.isfinite(number):
        raise InvalidInput(f"{what} must be finite, got {value!r}")
    return number


def _numbers(values: "Any", what: str) -> "tuple[float, ...]":
    if not isinstance(values, (list, tuple)):
        raise InvalidInput(f"{what} must be a list, got {values!r}")
    return tuple(_number(v, what) for v in values)


def _list(values: "Any", what: str) -> "list[Any]":
    if not isinstance(values, (list, tuple)):
        raise InvalidInput(f"{what} must be a list, got {values!r}")
    return list(values)


def _rows(values: "Any", what: str, width: int) -> "tuple[tuple[float, ...], ...]":
    """A list of fixed-width numeric rows, such as atoms or step pieces."""
    rows = tuple(_numbers(row, what) for row in _list(values, f"{what}s"))
    for row in rows:
        if len(row) != width:
            raise InvalidInput(f"each {what} needs {width} numbers, got {list(row)!r}")
    return rows


def _object(record: "Any", what: str) -> "Mapping[str, Any]":
    if not isinstance(record, dict):
        raise InvalidInput(f"{what} must be an object, got {record!r}")
    return record


def _complex(value: "Any", what: str) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(_number(value[0], what), _number(value[1], what))
    raise InvalidInput(f"{what} must be a pair [x, y], got {value!r}")


# Growth functions.


def build_growth(record: "Mapping[str, Any]") -> "GrowthFunction":
    kind = _require(record, "kind", "growth function")
    if kind == "power":
        return Power(_number(_require(record, "p", "power"), "p"))
    if kind == "power_log":
        return PowerLog(
            _number(_require(record, "p", "power_log"), "p"),
            _number(record.get("a", 1.0), "a"),
        )
    if kind == "piecewise":
        return PiecewisePower(
            _numbers(_require(record, "breakpoints", "piecewise"), "breakpoints"),
            _numbers(_require(record, "exponents", "piecewise"), "exponents"),
        )
    if kind == "tabulated":
        return Tabulated(
            _numbers(_require(record, "t", "tabulated"), "t"),
            _numbers(_require(record, "values", "tabulated"), "values"),
        )
    if kind == "transform":
        args = [
            build_growth(arg) if isinstance(arg, dict) else _number(arg, "argument")
            for arg in _list(_require(record, "args", "transform"), "transform args")
        ]
        return transform(_require(record, "transform", "transform"), *args)
    raise InvalidInput(f"unknown growth function kind {kind!r}")


# Measures.


def build_measure(record: "Mapping[str, Any]") -> "Measure":
    kind = _require(record, "kind", "measure")
    if kind == "lebesgue_alpha":
        return LebesgueAlpha(_number(record.get("alpha", 0.0), "alpha"))
    if kind == "density":
        expression = parse_expression(
            _require(record, "expr", "density"), PLANE_VARIABLES
        )
        bounds = record.get("bounds")
        return Density(
            expression,
            y_exponent=_number(record.get("y_exponent", 0.0), "y_exponent"),
            y_min=_number(record.get("y_min", 0.0), "y_min"),
            bounds=None if bounds is None else _rows(bounds, "bound", 2),  # type: ignore[arg-type]
            description=expression.source,
        )
    if kind == "atomic":
        points = _require(record, "points", "atomic measure")
        return Atomic(_rows(points, "atom", 3))  # type: ignore[arg-type]
    if kind == "canonical":
        phi = build_growth(_require(record, "phi", "canonical measure"))
        return canonical_measure(phi, _number(record.get("s", 1.0), "s")).measure
    raise InvalidInput(f"unknown measure kind {kind!r}")


# Witnesses and boundary data.


def _envelope(record: "Optional[Mapping[str, Any]]") -> "Optional[Envelope]":
    if record is None:
        return None
    record = _object(record, "envelope")
    return Envelope(
        _number(_require(record, "amplitude", "envelope"), "amplitude"),
        _number(_require(record, "decay", "envelope"), "decay"),
        _number(record.get("center", 0.0), "center"),
        _number(record.get("radius", 0.0), "radius"),
    )


def build_boundary(record: "Mapping[str, Any]") -> "LineFunction":
    record = _object(record, "boundary data")
    if "pieces" in record:
        pieces = _rows(record["pieces"], "piece", 3)
        return StepFunction(pieces)  # type: ignore[arg-type]
    expression = parse_expression(_require(record, "expr", "boundary data"), LINE_VARIABLES)
    support = record.get("support")
    return ExpressionLineFunction(
        expression=expression,
        bounds=None if support is None else _numbers(support, "support"),  # type: ignore[arg-type]
        envelope=_envelope(record.get("envelope")),
    )


def build_witness(record: "Mapping[str, Any]") -> "HalfPlaneFunction":
    kind = _require(record, "kind", "witness")
    factor = _number(record.get("factor", 1.0), "factor")
    if kind in ("hardy_test", "bergman_test"):
        z = _complex(_require(record, "z", kind), "z")
        phi = build_growth(_require(record, "phi", kind))
        rho = record.get("rho")
        rho = None if rho is None else _number(rho, "rho")
        if kind == "hardy_test":
            return hardy_test(z, phi, factor, rho)
        return bergman_test(z, phi, _number(record.get("alpha", 0.0), "alpha"), factor, rho)
    if kind == "power":
        return PowerWitness(_number(_require(record, "a", "power witness"), "a"), factor)
    if kind == "poisson":
        boundary = build_boundary(_require(record, "boundary", "poisson witness"))
        if not isinstance(boundary, StepFunction):
            raise InvalidInput("poisson witnesses take step boundary data ('pieces')")
        return PoissonWitness(boundary, factor)
    if kind == "constant":
        return ConstantFunction(factor * _number(_require(record, "value", "constant"), "value"))
    if kind == "expression":
        expression = parse_expression(_require(record, "expr", "expression witness"))
        return ExpressionHalfPlaneFunction(
            expression=expression, envelope=_envelope(record.get("envelope"))
        )
    raise InvalidInput(f"unknown witness kind {kind!r}")


def build_context(record: "Any") -> WitnessContext:
    if isinstance(record, str):
        return WitnessContext(record)
    kind = _require(record, "kind", "context")
    return WitnessContext(kind, _number(record.get("alpha", 0.0), "alpha"))


def _checked(what: str, builder: "Callable[[Any], Any]", record: "Any") -> "Any":
    """Build ``record`` unless it is absent, reporting malformed fields as input errors."""
    if record is None:
        return None
    try:
        return builder(record)
    except CarlesonError:
        raise
    except (TypeError, ValueError, AttributeError, KeyError) as exc:
        raise InvalidInput(f"{what} is malformed: {exc!r}") from exc


# The run configuration.


@dataclass(frozen=True)
class RunConfig:
    """A parsed run document with typed accessors for its parts."""

    command: "Optional[str]" = None
    data: "dict[str, Any]" = field(default_factory=dict)
    output: "Optional[str]" = None

    @classmethod
    def from_dict(cls, data: "Any") -> "RunConfig":
        if not isinstance(data, dict):
            raise InvalidInput("configuration must be a JSON object")
        command = data.get("command")
        output = data.get("output")
        if command is not None and not isinstance(command, str):
            raise InvalidInput("'command' must be a string")
        if output is not None and not isinstance(output, str):
            raise InvalidInput("'output' must be a string")
        return cls(command, data, output)

    def has(self, key: str) -> bool:
        return key in self.data

    def get(self, key: str, default: "Any" = None) -> "Any":
        return self.data.get(key, default)

    def _build(self, key: str, builder: "Callable[[Any], Any]") -> "Any":
        return builder(_require(self.data, key, "configuration"))

    def growth(self, key: str = "phi") -> "GrowthFunction":
        return self._build(key, build_growth)  # type: ignore[no-any-return]

    def measure(self) -> "Measure":
        return self._build("measure", build_measure)  # type: ignore[no-any-return]

    def witness(self, key: str = "witness") -> "HalfPlaneFunction":
        return self._build(key, build_witness)  # type: ignore[no-any-return]

    def context(self) -> WitnessContext:
        return self._build("context", build_context)  # type: ignore[no-any-return]

    def number(self, key: str, default: "Optional[float]" = None) -> float:
        if key not in self.data:
            if default is None:
                raise InvalidInput(f"configuration is missing {key!r}")
            return default
        return _number(self.data[key], key)

    def optional_number(self, key: str) -> "Optional[float]":
        return None if self.data.get(key) is None else _number(self.data[key], key)

    @property
    def grids(self) -> "dict[str, Any]":
        grids = self.data.get("grids", {})
        if not isinstance(grids, dict):
            raise InvalidInput("'grids' must be an object")
        return grids

    def _grid(self, key: str, builder: "Callable[[Any], Any]") -> "Any":
        return _checked(f"grid {key!r}", builder, self.grids.get(key))

    def scan_grid(self, key: str = "scan") -> "Optional[ScanGrid]":
        return self._grid(key, ScanGrid.from_dict)  # type: ignore[no-any-return]

    def z_grid(self) -> "Optional[HalfPlaneGrid]":
        return self._grid("z", HalfPlaneGrid.from_dict)  # type: ignore[no-any-return]

    def probe_family(self) -> "Optional[ProbeFamily]":
        return self._grid("probes", ProbeFamily.from_dict)  # type: ignore[no-any-return]

    def lambdas(self) -> "Optional[FloatArray]":
        return self._grid("lambdas", lambda_grid)  # type: ignore[no-any-return]

    def quadrature(self) -> "Optional[QuadratureConfig]":
        tolerances = self.data.get("tolerances", {})
        record = tolerances.get("quadrature") if isinstance(tolerances, dict) else None
        return _checked("quadrature tolerances", QuadratureConfig.from_dict, record)  # type: ignore[no-any-return]

    def as_dict(self) -> "dict[str, Any]":
        return dict(self.data)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InvalidInput(f"cannot read configuration {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"configuration {path!r} is not valid JSON: {exc}") from exc
    logger.debug("loaded configuration from %s", path)
    return RunConfig.from_dict(data)
