"""
Grid certification of Carleson-type conditions for a measure.

Each condition is sampled on a probe family (Carleson boxes, points ``z`` or
witness functions) and summarised by its sup over the family and a verdict
from :func:`carleson.trends.classify_trend`. A ``bounded`` verdict is a
grid certificate, not a proof; reports say so.
"""

import logging
import math

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from carleson import trends
from carleson.exceptions import (
    AccuracyFailure,
    InvalidParameter,
    PreconditionViolation,
)
from carleson.functions import StepFunction
from carleson.grids import HalfPlaneGrid, ProbeFamily, ScanGrid, lambda_grid
from carleson.growth import (
    classify,
    compose_inverse,
    dini_constant,
    estimate_indices,
    quotient_monotone,
    reciprocal,
)
from carleson.norms import luxemburg_norm, modular, modular_integral
from carleson.parallel import ordered_map
from carleson.quadrature import CarlesonSquare, Density, Interval, LebesgueAlpha
from carleson.reports import Probe, Probes, Report, format_number, to_json_value
from carleson.witnesses import (
    KernelWitness,
    PoissonWitness,
    WitnessContext,
    bergman_test,
    hardy_test,
    select_rho,
)


if TYPE_CHECKING:
    from typing import Any, Callable, Iterable, Optional, Sequence

    from carleson.functions import HalfPlaneFunction
    from carleson.growth import GrowthFunction
    from carleson.quadrature import Measure, QuadratureConfig
    from carleson.typing import RenderContext


logger = logging.getLogger(__name__)

CONDITIONS = ("box", "berezin", "witness_modular", "witness_weak")

GRID_CERTIFIED = "grid-certified: sup taken over a finite probe family"
WITNESS_RESTRICTED = "witness-restricted: explicit witnesses only, not every function"


class CertificationReport(Report):
    template_name = "carleson/reports/certification.txt"

    def __init__(
        self,
        condition: str,
        parameters: "dict[str, Any]",
        probes: Probes,
        constants: "Optional[dict[str, Any]]" = None,
        hypotheses: "Optional[dict[str, Any]]" = None,
        notes: "Sequence[str]" = (GRID_CERTIFIED,),
    ) -> None:
        if condition not in CONDITIONS:
            raise InvalidParameter(f"unknown condition {condition!r}")
        self.condition = condition
        self.parameters = parameters
        self.probes = probes.sorted()
        self.constants = constants or {}
        self.hypotheses = hypotheses or {}
        self.notes = tuple(notes)
        self.verdict, self.unbounded_end = self._verdict()

    def _verdict(self) -> "tuple[str, Optional[str]]":
        params, values = self.probes.trend_data()
        divergent = not self.probes.finite
        verdict, end = trends.classify_trend(params, values, divergent=divergent)
        if verdict == trends.BOUNDED and self.probes.excluded:
            # A bounded verdict needs a finite value for every probe.
            return trends.INCONCLUSIVE, None
        return verdict, end

    @property
    def sup_estimate(self) -> "Optional[float]":
        return self.probes.sup_estimate

    def as_dict(self) -> "dict[str, Any]":
        return {
            "condition": self.condition,
            "parameters": self.parameters,
            "probes": [probe.as_dict() for probe in self.probes],
            "sup_estimate": self.sup_estimate,
            "divergent": not self.probes.finite,
            "verdict": self.verdict,
            "unbounded_end": self.unbounded_end,
            "excluded": self.probes.excluded,
            "constants": self.constants,
            "hypotheses": self.hypotheses,
            "notes": list(self.notes),
        }

    def get_context_data(
        self, parent_context: "Optional[RenderContext]" = None
    ) -> "Optional[RenderContext]":
        parameters = to_json_value(self.parameters)
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "unbounded_end": self.unbounded_end,
            "probe_count": len(self.probes),
            "sup_estimate": format_number(self.sup_estimate),
            "parameters": sorted(parameters.items()),
            "excluded": self.probes.excluded,
        }


def _evaluate(
    jobs: "Sequence[tuple[str, Optional[float], Callable[[], tuple[float, dict[str, Any]]]]]",
    threads: "Optional[int]",
) -> Probes:
    """Run probe evaluations, excluding those whose quadrature fails."""

    def run(job: "tuple[str, Optional[float], Callable[[], tuple[float, dict[str, Any]]]]") -> Probe:
        probe_id, parameter, evaluate = job
        try:
            value, details = evaluate()
        except AccuracyFailure as exc:
            logger.warning("probe %s excluded: %s", probe_id, exc)
            return Probe(probe_id, parameter, math.nan, excluded=True, error=exc.as_dict())
        logger.debug("probe %s = %.12g", probe_id, value)
        return Probe(probe_id, parameter, value, details=details)

    return Probes(ordered_map(run, jobs, threads))


def _describe(phi: "Optional[GrowthFunction]") -> "Optional[dict[str, Any]]":
    return None if phi is None else phi.describe()


def _z_id(z: complex) -> str:
    return f"z{z.real:+.3e}{z.imag:+.3e}i"


def _measure_alpha(measure: "Measure") -> "Optional[float]":
    return measure.alpha if isinstance(measure, LebesgueAlpha) else None


# Condition (i): Carleson boxes.


def box_condition(
    measure: "Measure",
    phi: "GrowthFunction",
    s: float = 1.0,
    family: "Optional[ProbeFamily]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    threads: "Optional[int]" = None,
) -> CertificationReport:
    """Sample ``mu(Q_I) * phi(1/|I|**s)`` over a family of intervals ``I``."""
    if not s > 0:
        raise InvalidParameter(f"s must be positive, got {s}")
    family = family or ProbeFamily.default()

    def job(member: "tuple[str, float, float]") -> "tuple[str, float, Callable[[], tuple[float, dict[str, Any]]]]":
        probe_id, center, length = member

        def evaluate() -> "tuple[float, dict[str, Any]]":
            mass = measure.of_square(CarlesonSquare(Interval(center, length)), cfg)
            value = mass * float(phi.value(length**-s)) if mass > 0 else 0.0
            return value, {"center": center, "length": length, "mass": mass}

        return probe_id, length, evaluate

    probes = _evaluate([job(member) for member in family.members()], threads)
    return CertificationReport(
        "box",
        {
            "s": s,
            "phi": _describe(phi),
            "measure": measure.describe(),
            "family": family.as_dict(),
        },
        probes,
    )


# Condition (ii): Berezin-type integrals.


def _berezin_hypotheses(
    phi1: "GrowthFunction",
    phi2: "GrowthFunction",
    context: "Optional[WitnessContext]",
) -> "dict[str, Any]":
    quotient = quotient_monotone(phi1, phi2)
    if not quotient.passed:
        raise PreconditionViolation(
            "phi2/phi1 non-decreasing",
            f"phi2/phi1 decreases by {quotient.worst_drop:.3g} near t={quotient.location:.3g}",
        )
    tol = 1e-12
    first, second = estimate_indices(phi1), estimate_indices(phi2)
    in_u1, in_l1 = first.lower >= 1 - tol, first.upper <= 1 + tol
    in_u2, in_l2 = second.lower >= 1 - tol, second.upper <= 1 + tol
    if context is None:
        if not (in_u1 or in_l1):
            raise PreconditionViolation("phi1 convex or in L")
        applied = "phi1 convex or in L"
    else:
        if not ((in_u1 or in_l1) and (in_u2 or in_l2)):
            raise PreconditionViolation("phi1, phi2 in L or U")
        applied = "phi1, phi2 in L or U"
    return {
        "quotient_monotone": quotient.as_dict(),
        "class": applied,
        "path": "general" if context is None else context.kind,
    }


def berezin_condition(
    measure: "Measure",
    phi1: "GrowthFunction",
    phi2: "GrowthFunction",
    s: float = 1.0,
    rho: "Optional[float]" = None,
    z_grid: "Optional[HalfPlaneGrid]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    context: "Optional[WitnessContext]" = None,
    threads: "Optional[int]" = None,
) -> CertificationReport:
    """
    Sample ``int phi2(phi1^-1(1/y**s) y**c / |w - conj(z)|**c) dmu(w)`` over ``z``.

    ``c = 2s/rho``. With a witness ``context`` the specialised Hardy
    (``s = 1``) or Bergman (``s = 2 + alpha``) path is taken and both growth
    functions must lie in one of the classes L or U; the general path only
    needs ``phi1`` convex or in L.
    """
    if context is not None:
        s = context.s
    if not s > 0:
        raise InvalidParameter(f"s must be positive, got {s}")
    hypotheses = _berezin_hypotheses(phi1, phi2, context)
    rho = select_rho(phi1) if rho is None else float(rho)
    if not 0 < rho <= 1:
        raise InvalidParameter(f"rho must lie in (0, 1], got {rho}")
    z_grid = z_grid or HalfPlaneGrid.default()
    # Translation invariance: for V_alpha the value only depends on Im z.
    x_invariant = isinstance(measure, LebesgueAlpha)
    cache: "dict[float, tuple[float, dict[str, Any]]]" = {}

    def integral(z: complex) -> "tuple[float, dict[str, Any]]":
        kernel = KernelWitness.berezin(z, phi1, s, rho)  # type: ignore[arg-type]
        value = modular(kernel, phi2, measure, cfg)
        return value, {"z": z, "prefactor": kernel.prefactor, "exponent": kernel.exponent}

    def job(z: complex) -> "tuple[str, float, Callable[[], tuple[float, dict[str, Any]]]]":
        def evaluate() -> "tuple[float, dict[str, Any]]":
            if x_invariant:
                if z.imag not in cache:
                    cache[z.imag] = integral(complex(0.0, z.imag))
                value, details = cache[z.imag]
                return value, {**details, "z": z}
            return integral(z)

        return _z_id(z), z.imag, evaluate

    points = z_grid.points()
    probes = _evaluate([job(z) for z in points], 1 if x_invariant else threads)
    b2 = estimate_indices(phi2).upper
    constants: "dict[str, Any]" = {"box_to_berezin_factor": 10 ** (s * b2 / rho)}
    if x_invariant:
        values = [p.value for p in probes.included if math.isfinite(p.value)]
        if values and max(values) > 0:
            constants["relative_spread_over_z"] = (max(values) - min(values)) / max(values)
    return CertificationReport(
        "berezin",
        {
            "s": s,
            "alpha": _measure_alpha(measure),
            "phi1": _describe(phi1),
            "phi2": _describe(phi2),
            "rho": rho,
            "measure": measure.describe(),
            "z_grid": z_grid.as_dict(),
        },
        probes,
        constants=constants,
        hypotheses=hypotheses,
    )


# Embedding criteria.


@dataclass(frozen=True)
class EmbeddingResult:
    verdict: str
    constant: "Optional[float]"
    sup_on_grid: float
    location: float
    unbounded_end: "Optional[str]"
    grid: ScanGrid

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> "dict[str, Any]":
        return {
            "verdict": self.verdict,
            "constant": self.constant,
            "sup_on_grid": self.sup_on_grid,
            "location": self.location,
            "unbounded_end": self.unbounded_end,
            "grid": self.grid.as_dict(),
        }


def embedding_criterion(
    phi1: "GrowthFunction",
    phi2: "GrowthFunction",
    s: float = 1.0,
    alpha_target: float = 0.0,
    t_grid: "Optional[ScanGrid]" = None,
) -> EmbeddingResult:
    """Best ``C`` with ``phi2(phi1^-1(t**s)) <= C t**(2 + alpha_target)`` on the grid."""
    if not s > 0:
        raise InvalidParameter(f"s must be positive, got {s}")
    if alpha_target <= -1:
        raise InvalidParameter(f"alpha must be > -1, got {alpha_target}")
    t_grid = t_grid or ScanGrid.default()
    ts = t_grid.values()
    ratio = np.asarray(phi2.value(phi1.inverse(ts**s)), dtype=float) / ts ** (2 + alpha_target)
    index = int(np.argmax(ratio))
    trend, end = trends.classify_trend(ts, ratio)
    verdict = {trends.BOUNDED: "pass", trends.UNBOUNDED_TREND: "fail"}.get(trend, "inconclusive")
    return EmbeddingResult(
        verdict=verdict,
        constant=float(ratio[index]) if verdict == "pass" else None,
        sup_on_grid=float(ratio[index]),
        location=float(ts[index]),
        unbounded_end=end,
        grid=t_grid,
    )


# Canonical measures.


@dataclass(frozen=True)
class CanonicalMeasure:
    measure: Density
    phi: "GrowthFunction"
    s: float
    constant_bound: "Optional[float]"

    def as_dict(self) -> "dict[str, Any]":
        return {
            "measure": self.measure.describe(),
            "phi": self.phi.describe(),
            "s": self.s,
            "constant_bound": self.constant_bound,
        }


def canonical_measure(phi: "GrowthFunction", s: float = 1.0) -> CanonicalMeasure:
    """
    ``dx dy / (y**2 phi(1/y**s))``, an ``(s, phi)``-Carleson measure.

    The box constant is at most ``C/s`` with ``C`` the Dini constant of
    ``1/phi(1/t)``.
    """
    if s < 1:
        raise InvalidParameter(f"canonical measures need s >= 1, got {s}")
    report = classify(phi)
    if not report.in_U_and_nabla2:
        raise PreconditionViolation("phi in U and nabla2")
    a, b = report.indices.lower, report.indices.upper
    scale = 1 / float(phi.value(1.0))

    def density(x: "Any", y: "Any") -> "Any":
        y = np.asarray(y, dtype=float)
        return 1 / (y**2 * np.asarray(phi.value(y**-s), dtype=float))

    measure = Density(
        density,
        y_exponent=s * a - 2,
        bounds=((scale, s * a - 2), (scale, s * b - 2)),
        description=f"1/(y^2 phi(1/y^{s:g})) for phi = {phi}",
    )
    dual = reciprocal(phi)
    dini = dini_constant(dual, dual)
    bound = None if dini.constant is None else dini.constant / s
    return CanonicalMeasure(measure, phi, s, bound)


# Conditions (iii) and (iv) on witness families.


@dataclass(frozen=True)
class WitnessInjection:
    modular: CertificationReport
    weak: CertificationReport

    def as_dict(self) -> "dict[str, Any]":
        return {"modular": self.modular.as_dict(), "weak": self.weak.as_dict()}


def default_boundaries() -> "tuple[StepFunction, ...]":
    return (StepFunction.indicator(-1.0, 1.0), StepFunction.indicator(0.0, 4.0))


def _witness_family(
    phi1: "GrowthFunction",
    context: WitnessContext,
    z_grid: HalfPlaneGrid,
    boundaries: "Iterable[StepFunction]",
) -> "list[tuple[str, Optional[float], HalfPlaneFunction, float]]":
    """``(id, trend parameter, witness, normalising norm)`` for every witness."""
    family: "list[tuple[str, Optional[float], HalfPlaneFunction, float]]" = []
    for z in z_grid.points():
        if context.kind == "hardy":
            family.append((f"F/{_z_id(z)}", z.imag, hardy_test(z, phi1), 1.0))
        else:
            witness = bergman_test(z, phi1, context.alpha)
            family.append((f"G/{_z_id(z)}", z.imag, witness, 1.0))
    if context.kind == "hardy":
        for index, boundary in enumerate(boundaries):
            # The Hardy-Orlicz norm of a Poisson integral is the norm of its data.
            norm = luxemburg_norm(boundary, phi1).norm
            family.append((f"P/{index:02d}", None, PoissonWitness(boundary), norm))
    return family


def witness_injection_test(
    measure: "Measure",
    phi1: "GrowthFunction",
    phi2: "GrowthFunction",
    context: WitnessContext,
    z_grid: "Optional[HalfPlaneGrid]" = None,
    lambdas: "Optional[Sequence[float]]" = None,
    boundaries: "Optional[Iterable[StepFunction]]" = None,
    cfg: "Optional[QuadratureConfig]" = None,
    threads: "Optional[int]" = None,
) -> WitnessInjection:
    """
    Modular and weak-type injection quantities over explicit witnesses.

    Test functions ``F_z`` and ``G_z`` are certified unit-ball members and are
    taken with norm 1. The weak quantity ``sup_lambda phi2(lambda) *
    mu(|F| > lambda ||F||)`` counts the quadrature weights of the modular's
    adapted rule on each level set.
    """
    z_grid = z_grid or HalfPlaneGrid.default()
    levels = lambda_grid(lambdas)
    family = _witness_family(
        phi1, context, z_grid, default_boundaries() if boundaries is None else boundaries
    )
    phi2_levels = np.asarray(phi2.value(levels), dtype=float)

    def both(member: "tuple[str, Optional[float], HalfPlaneFunction, float]") -> "tuple[Probe, Probe]":
        probe_id, parameter, witness, norm = member
        try:
            result = modular_integral(witness, phi2, measure, cfg, scale=1 / norm)
        except AccuracyFailure as exc:
            logger.warning("witness %s excluded: %s", probe_id, exc)
            failed = (probe_id, parameter, math.nan)
            return (
                Probe(*failed, excluded=True, error=exc.as_dict()),
                Probe(*failed, excluded=True, error=exc.as_dict()),
            )
        details = {"witness": witness.describe(), "norm": norm}
        if result is None:
            return (
                Probe(probe_id, parameter, math.inf, details=details),
                Probe(probe_id, parameter, math.inf, details=details),
            )
        assert result.rule is not None
        rule = result.rule
        # Level-set mass outside the truncation is bounded by the modular's tail.
        sizes = np.asarray(witness.modulus(rule.x, rule.y), dtype=float) / norm
        masses = np.array([rule.measure_where(sizes > level) for level in levels])
        profile = phi2_levels * masses
        peak = int(np.argmax(profile))
        weak_details = {
            **details,
            "peak_level": float(levels[peak]),
            "tail_value": float(profile[-1]),
        }
        return (
            Probe(probe_id, parameter, result.value, details={**details, "cells": result.cells}),
            Probe(probe_id, parameter, float(profile[peak]), details=weak_details),
        )

    pairs = ordered_map(both, family, threads)
    parameters = {
        "context": context.as_dict(),
        "phi1": _describe(phi1),
        "phi2": _describe(phi2),
        "measure": measure.describe(),
        "z_grid": z_grid.as_dict(),
    }
    notes = (GRID_CERTIFIED, WITNESS_RESTRICTED)
    return WitnessInjection(
        modular=CertificationReport(
            "witness_modular", parameters, Probes(p for p, _ in pairs), notes=notes
        ),
        weak=CertificationReport(
            "witness_weak",
            {**parameters, "levels": levels},
            Probes(q for _, q in pairs),
            notes=notes,
        ),
    )


def carleson_function(phi1: "GrowthFunction", phi2: "GrowthFunction") -> "GrowthFunction":
    """``phi2 o phi1^-1``, the growth function of the box condition for a pair."""
    return compose_inverse(phi2, phi1)
