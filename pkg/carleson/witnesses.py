"""
Explicit functions on the upper half-plane used as witnesses.

The test functions ``F_z`` (Hardy-Orlicz) and ``G_z`` (Bergman-Orlicz) are
kernel powers ``P * (w - conj(z))**(-c)`` normalised to lie in the unit ball.
Fractional powers use the principal logarithm: ``w - conj(z)`` always has
positive imaginary part, so the branch is unambiguous.
"""

import dataclasses
import logging
import math

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from carleson.exceptions import DomainError, InvalidParameter
from carleson.functions import HalfPlaneFunction, StepFunction, line_quad
from carleson.growth import estimate_indices
from carleson.norms import line_norm_profile, luxemburg_norm, modular
from carleson.quadrature import Envelope, LebesgueAlpha, beta_value


if TYPE_CHECKING:
    from typing import Any, Iterable, Optional, Sequence

    from carleson.functions import LineFunction
    from carleson.growth import GrowthFunction, ScanGrid
    from carleson.quadrature import QuadratureConfig
    from carleson.typing import ComplexArray, FloatArray


logger = logging.getLogger(__name__)

CONTEXTS = ("hardy", "bergman")

UNIT_BALL_TOLERANCE = 1e-6


def select_rho(phi: "GrowthFunction", grid: "Optional[ScanGrid]" = None) -> float:
    """1 for convex-like ``phi`` (lower index >= 1), otherwise the lower index."""
    lower = estimate_indices(phi, grid).lower
    return 1.0 if lower >= 1 - 1e-12 else lower


def bergman_constant(alpha: float) -> float:
    """``B(1 + alpha, 2 + alpha) * B(1/2, (3 + 2 alpha)/2)``; ``pi/4`` at ``alpha = 0``."""
    if alpha <= -1:
        raise InvalidParameter(f"alpha must be > -1, got {alpha}")
    return beta_value(1 + alpha, 2 + alpha) * beta_value(0.5, (3 + 2 * alpha) / 2)


@dataclass(frozen=True)
class WitnessContext:
    kind: str
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in CONTEXTS:
            raise InvalidParameter(f"unknown context {self.kind!r}; expected one of {list(CONTEXTS)}")
        if self.alpha <= -1:
            raise InvalidParameter(f"alpha must be > -1, got {self.alpha}")

    @property
    def s(self) -> float:
        """Exponent of ``y`` in the Carleson box condition for this space."""
        return 1.0 if self.kind == "hardy" else 2 + self.alpha

    def as_dict(self) -> "dict[str, Any]":
        return {"kind": self.kind, "alpha": self.alpha if self.kind == "bergman" else None}


def _upper(z: complex) -> complex:
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"point {z} is not in the upper half-plane")
    return z


class Witness(HalfPlaneFunction):
    """A half-plane function with a real or complex value and a scale factor."""

    kind = "witness"
    factor: float = 1.0

    def scaled(self, factor: float) -> "Witness":  # type: ignore[override]
        return dataclasses.replace(self, factor=self.factor * factor)  # type: ignore[type-var]

    @property
    def is_zero(self) -> bool:
        return self.factor == 0


@dataclass(frozen=True)
class KernelWitness(Witness):
    """``factor * prefactor * (w - conj(z))**(-exponent)``."""

    z: complex
    prefactor: float
    exponent: float
    factor: float = 1.0
    kind: str = "kernel"
    meta: "dict[str, Any]" = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", _upper(self.z))
        if self.exponent <= 0:
            raise InvalidParameter(f"kernel exponent must be positive, got {self.exponent}")

    @classmethod
    def berezin(
        cls, z: complex, phi1: "GrowthFunction", s: float, rho: float
    ) -> "KernelWitness":
        """``phi1^-1(1/y**s) * y**(2s/rho) * (w - conj(z))**(-2s/rho)``."""
        z = _upper(z)
        c = 2 * s / rho
        prefactor = float(phi1.inverse(z.imag ** (-s))) * z.imag**c
        return cls(z, prefactor, c, kind="berezin", meta={"s": s, "rho": rho})

    def value(self, w: "ComplexArray") -> "ComplexArray":
        w = np.asarray(w, dtype=complex)
        return self.factor * self.prefactor * np.exp(-self.exponent * np.log(w - np.conj(self.z)))

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        distance = np.hypot(x - self.z.real, y + self.z.imag)
        return abs(self.factor) * self.prefactor * np.power(distance, -self.exponent)

    @property
    def envelope(self) -> Envelope:  # type: ignore[override]
        # |w - conj(z)| >= |w - Re z| on the closed half-plane.
        return Envelope(abs(self.factor) * self.prefactor, self.exponent, self.z.real, 0.0)

    @property
    def sup_bound(self) -> float:  # type: ignore[override]
        return abs(self.factor) * self.prefactor * self.z.imag ** (-self.exponent)

    @property
    def center(self) -> float:
        return self.z.real

    @property
    def scale(self) -> float:
        return self.z.imag

    def describe(self) -> "dict[str, Any]":
        return {
            "kind": self.kind,
            "z": [self.z.real, self.z.imag],
            "prefactor": self.prefactor,
            "exponent": self.exponent,
            "factor": self.factor,
            **self.meta,
        }


@dataclass(frozen=True)
class HardyTest(KernelWitness):
    phi: "Optional[GrowthFunction]" = field(default=None, compare=False)
    rho: float = 1.0


@dataclass(frozen=True)
class BergmanTest(KernelWitness):
    phi: "Optional[GrowthFunction]" = field(default=None, compare=False)
    rho: float = 1.0
    alpha: float = 0.0


def hardy_test(
    z: complex, phi: "GrowthFunction", factor: float = 1.0, rho: "Optional[float]" = None
) -> HardyTest:
    """``F_z(w) = phi^-1(1/(pi y)) y**(2/rho) / (w - conj(z))**(2/rho)``."""
    z = _upper(z)
    rho = select_rho(phi) if rho is None else rho
    c = 2 / rho
    prefactor = float(phi.inverse(1 / (math.pi * z.imag))) * z.imag**c
    return HardyTest(
        z, prefactor, c, factor, kind="hardy_test", meta={"rho": rho}, phi=phi, rho=rho
    )


def bergman_test(
    z: complex,
    phi: "GrowthFunction",
    alpha: float = 0.0,
    factor: float = 1.0,
    rho: "Optional[float]" = None,
) -> BergmanTest:
    """``G_z(w) = phi^-1(1/(C_alpha y**(2+alpha))) y**c / (w - conj(z))**c``, ``c = (4+2alpha)/rho``."""
    z = _upper(z)
    rho = select_rho(phi) if rho is None else rho
    c = (4 + 2 * alpha) / rho
    level = 1 / (bergman_constant(alpha) * z.imag ** (2 + alpha))
    prefactor = float(phi.inverse(level)) * z.imag**c
    return BergmanTest(
        z,
        prefactor,
        c,
        factor,
        kind="bergman_test",
        meta={"rho": rho, "alpha": alpha},
        phi=phi,
        rho=rho,
        alpha=alpha,
    )


@dataclass(frozen=True)
class PowerWitness(Witness):
    """``(w + i)**(-a)``."""

    a: float
    factor: float = 1.0
    kind = "power"

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise InvalidParameter(f"power witness needs a > 0, got {self.a}")

    def value(self, w: "ComplexArray") -> "ComplexArray":
        w = np.asarray(w, dtype=complex)
        return self.factor * np.exp(-self.a * np.log(w + 1j))

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        distance = np.hypot(np.asarray(x, dtype=float), np.asarray(y, dtype=float) + 1)
        return abs(self.factor) * np.power(distance, -self.a)

    @property
    def envelope(self) -> Envelope:  # type: ignore[override]
        return Envelope(abs(self.factor), self.a, 0.0, 0.0)

    @property
    def sup_bound(self) -> float:  # type: ignore[override]
        return abs(self.factor)

    def describe(self) -> "dict[str, Any]":
        return {"kind": self.kind, "a": self.a, "factor": self.factor}


@dataclass(frozen=True)
class PoissonWitness(Witness):
    """Poisson integral of step boundary data, in closed form."""

    boundary: StepFunction
    factor: float = 1.0
    kind = "poisson"

    def harmonic(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        total = np.zeros(np.broadcast(x, y).shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            for a, b, v in self.boundary.pieces:
                total = total + v * (np.arctan((b - x) / y) - np.arctan((a - x) / y))
        return self.factor * total / math.pi

    def modulus(self, x: "FloatArray", y: "FloatArray") -> "FloatArray":
        return np.abs(self.harmonic(x, y))

    @property
    def is_zero(self) -> bool:
        return self.factor == 0 or self.boundary.is_zero

    @property
    def envelope(self) -> "Optional[Envelope]":  # type: ignore[override]
        support = self.boundary.support
        if support is None:
            return Envelope(0.0, math.inf)
        center = (support[0] + support[1]) / 2
        half_width = (support[1] - support[0]) / 2
        mass = abs(self.factor) * self.boundary.l1_norm
        return Envelope(2 * mass / math.pi, 1.0, center, 2 * half_width)

    @property
    def sup_bound(self) -> float:  # type: ignore[override]
        return abs(self.factor) * max((abs(v) for _, _, v in self.boundary.pieces), default=0.0)

    @property
    def center(self) -> float:
        support = self.boundary.support
        return 0.0 if support is None else (support[0] + support[1]) / 2

    @property
    def scale(self) -> float:
        support = self.boundary.support
        return 1.0 if support is None else support[1] - support[0]

    def describe(self) -> "dict[str, Any]":
        return {"kind": self.kind, "boundary": self.boundary.describe(), "factor": self.factor}


def poisson_integral(boundary: "LineFunction", z: complex) -> float:
    """
    ``(1/pi) int y / ((x - t)**2 + y**2) f(t) dt``.

    Substituting ``t = x + y tan(theta)`` turns the kernel into ``dtheta/pi``
    over ``(-pi/2, pi/2)``; step data use the arctangent antiderivative.
    """
    z = _upper(z)
    x, y = z.real, z.imag
    if isinstance(boundary, StepFunction):
        return float(PoissonWitness(boundary).harmonic(x, y))
    breaks = tuple(math.atan((p - x) / y) for p in boundary.breakpoints)

    def integrand(theta: float) -> float:
        return float(boundary(np.asarray(x + y * math.tan(theta))))

    return line_quad(integrand, -math.pi / 2, math.pi / 2, breaks) / math.pi


def hardy_test_eval(z: complex, phi: "GrowthFunction", w: complex) -> float:
    """``|F_z(w)|``."""
    return hardy_test(z, phi).at(_upper(w))


def bergman_test_eval(z: complex, phi: "GrowthFunction", alpha: float, w: complex) -> float:
    """``|G_z(w)|``."""
    return bergman_test(z, phi, alpha).at(_upper(w))


# Unit-ball certificates.


@dataclass(frozen=True)
class UnitBallCertificate:
    witness: "dict[str, Any]"
    modular: float
    passed: bool
    line_modulars: "tuple[tuple[float, float], ...]" = ()

    def as_dict(self) -> "dict[str, Any]":
        return {
            "witness": self.witness,
            "modular": self.modular,
            "passed": self.passed,
            "line_modulars": [list(p) for p in self.line_modulars],
        }


def default_heights(witness: KernelWitness) -> "FloatArray":
    """Heights ``v`` from ``1e-3 * y`` to ``1e3 * y`` on a log grid."""
    return witness.z.imag * np.geomspace(1e-3, 1e3, 13)


def verify_unit_ball(
    witness: "KernelWitness",
    cfg: "Optional[QuadratureConfig]" = None,
    heights: "Optional[Sequence[float]]" = None,
) -> UnitBallCertificate:
    """
    Check that a test function lies in the unit ball of its space.

    Hardy test functions: the sup over horizontal lines of the line modular,
    taken on a grid of heights. Bergman test functions: the ``V_alpha`` modular.
    """
    if isinstance(witness, HardyTest):
        assert witness.phi is not None
        phi = witness.phi
        vs = default_heights(witness) if heights is None else [float(v) for v in heights]
        lines = tuple((float(v), modular(witness.restrict(float(v)), phi)) for v in vs)
        value = max(m for _, m in lines)
    elif isinstance(witness, BergmanTest):
        assert witness.phi is not None
        lines = ()
        value = modular(witness, witness.phi, LebesgueAlpha(witness.alpha), cfg)
    else:
        raise InvalidParameter(f"no unit-ball certificate for {witness.kind} witnesses")
    passed = value <= 1 + UNIT_BALL_TOLERANCE
    if not passed:
        logger.info("witness %s has modular %.9g > 1", witness.kind, value)
    return UnitBallCertificate(witness.describe(), value, passed, lines)


# Pointwise growth bounds.


@dataclass(frozen=True)
class PointwiseBound:
    z: complex
    modulus: float
    bound: float
    ratio: float

    def as_dict(self) -> "dict[str, Any]":
        return {
            "z": [self.z.real, self.z.imag],
            "modulus": self.modulus,
            "bound": self.bound,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class PointwiseBoundReport:
    context: WitnessContext
    norm: float
    constant: float
    points: "tuple[PointwiseBound, ...]"

    @property
    def max_ratio(self) -> float:
        return max((p.ratio for p in self.points), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.constant * (1 + 1e-9)

    def as_dict(self) -> "dict[str, Any]":
        return {
            "context": self.context.as_dict(),
            "norm": self.norm,
            "constant": self.constant,
            "max_ratio": self.max_ratio,
            "passed": self.passed,
            "points": [p.as_dict() for p in self.points],
        }


def bergman_point_constant(alpha: float, rho: float) -> float:
    """``(4 * max(2**alpha, (2/3)**alpha) / pi)**(1/rho)``."""
    return (4 * max(2**alpha, (2 / 3) ** alpha) / math.pi) ** (1 / rho)


def pointwise_bound_check(
    f: HalfPlaneFunction,
    phi: "GrowthFunction",
    context: WitnessContext,
    z_grid: "Iterable[complex]",
    norm: "Optional[float]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
) -> PointwiseBoundReport:
    """
    Ratios of ``|F(z)|`` to the growth bound of its space on a grid.

    Hardy context: ``|F| / (phi^-1(2/(pi y)) ||F||)``, which must stay at
    most 1. Bergman context: ``|F| / (phi^-1(1/y**(2+alpha)) ||F||)`` against
    the reported constant. Without ``norm`` the Luxemburg norm is computed.
    """
    points = [_upper(z) for z in z_grid]
    if norm is None:
        if f.is_zero:
            norm = 0.0
        elif context.kind == "hardy":
            heights = sorted({z.imag for z in points})
            profile = line_norm_profile(f, phi, [h * 1e-3 for h in heights[:1]] + heights)
            norm = math.inf if profile.norm_estimate is None else profile.norm_estimate
        else:
            norm = luxemburg_norm(f, phi, LebesgueAlpha(context.alpha), cfg=cfg).norm
    if context.kind == "hardy":
        constant = 1.0

        def level(y: float) -> float:
            return 2 / (math.pi * y)

    else:
        constant = bergman_point_constant(context.alpha, select_rho(phi))

        def level(y: float) -> float:
            return y ** -(2 + context.alpha)

    results = []
    for z in points:
        value = f.at(z)
        bound = float(phi.inverse(level(z.imag))) * norm
        ratio = 0.0 if value == 0 else (value / bound if bound > 0 else math.inf)
        results.append(PointwiseBound(z, value, bound, ratio))
    return PointwiseBoundReport(context, norm, constant, tuple(results))
