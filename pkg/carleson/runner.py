"""Dispatch of run configurations to the toolkit operations."""

import logging

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from carleson import trends
from carleson.certify import (
    GRID_CERTIFIED,
    WITNESS_RESTRICTED,
    berezin_condition,
    box_condition,
    canonical_measure,
    carleson_function,
    embedding_criterion,
    witness_injection_test,
)
from carleson.exceptions import CarlesonError, InvalidInput, UnknownCommand
from carleson.grids import HalfPlaneGrid
from carleson.growth import classify, estimate_indices
from carleson.multipliers import OmegaWindow, multiplier_product_test, regime_classify
from carleson.parallel import ordered_map
from carleson.quadrature import ORACLE_TRIPLES, Atomic, LebesgueAlpha, oracle_check
from carleson.reports import CommandReport
from carleson.witnesses import WitnessContext, bergman_test, hardy_test


if TYPE_CHECKING:
    from typing import Any, Callable, Optional

    from carleson.config import RunConfig
    from carleson.quadrature import Measure


logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-6


@dataclass
class Outcome:
    result: "Any"
    verdict: "Optional[str]" = None
    notes: "tuple[str, ...]" = ()
    provenance: "dict[str, Any]" = field(default_factory=dict)


def _mass_provenance(measure: "Measure") -> str:
    if isinstance(measure, LebesgueAlpha):
        return "closed form |I|^(2+alpha)/(1+alpha)"
    if isinstance(measure, Atomic):
        return "exact sum over atoms"
    return "adaptive quadrature"


def _indices(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    indices = estimate_indices(config.growth("phi"), config.scan_grid())
    return Outcome(indices, provenance={"indices": "slope-ratio scan on the grid"})


def _classify(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    report = classify(config.growth("phi"), config.scan_grid())
    return Outcome(report, notes=(GRID_CERTIFIED,), provenance={"constants": "grid scans"})


def _certify_box(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    measure = config.measure()
    if config.has("phi"):
        phi = config.growth("phi")
    else:
        phi = carleson_function(config.growth("phi1"), config.growth("phi2"))
    report = box_condition(
        measure,
        phi,
        config.number("s", 1.0),
        config.probe_family(),
        config.quadrature(),
        threads,
    )
    return Outcome(
        report,
        report.verdict,
        report.notes,
        {"box_masses": _mass_provenance(measure)},
    )


def _certify_berezin(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    measure = config.measure()
    report = berezin_condition(
        measure,
        config.growth("phi1"),
        config.growth("phi2"),
        s=config.number("s", 1.0),
        rho=config.optional_number("rho"),
        z_grid=config.z_grid(),
        cfg=config.quadrature(),
        context=config.context() if config.has("context") else None,
        threads=threads,
    )
    return Outcome(
        report,
        report.verdict,
        report.notes,
        {
            "probe_values": "exact sum over atoms"
            if isinstance(measure, Atomic)
            else "adaptive quadrature",
            "box_to_berezin_factor": "closed form",
        },
    )


def _embed_check(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    result = embedding_criterion(
        config.growth("phi1"),
        config.growth("phi2"),
        config.number("s", 1.0),
        config.number("alpha", 0.0),
        config.scan_grid("t"),
    )
    return Outcome(result, result.verdict, (GRID_CERTIFIED,), {"ratio": "closed-form evaluation"})


def _canonical(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    phi = config.growth("phi")
    s = config.number("s", 1.0)
    canonical = canonical_measure(phi, s)
    report = box_condition(
        canonical.measure, phi, s, config.probe_family(), config.quadrature(), threads
    )
    bound = canonical.constant_bound
    sup = report.sup_estimate
    within = None if bound is None or sup is None else sup <= bound * (1 + 1e-6)
    return Outcome(
        {
            "canonical": canonical.as_dict(),
            "box": report.as_dict(),
            "constant_bound": bound,
            "within_bound": within,
        },
        report.verdict,
        report.notes,
        {"box_masses": "adaptive quadrature", "constant_bound": "Dini constant of 1/phi(1/t)"},
    )


def _combined(*verdicts: str) -> str:
    if trends.UNBOUNDED_TREND in verdicts:
        return trends.UNBOUNDED_TREND
    if all(v == trends.BOUNDED for v in verdicts):
        return trends.BOUNDED
    return trends.INCONCLUSIVE


def _witness_test(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    injection = witness_injection_test(
        config.measure(),
        config.growth("phi1"),
        config.growth("phi2"),
        config.context(),
        z_grid=config.z_grid(),
        lambdas=config.lambdas(),
        cfg=config.quadrature(),
        threads=threads,
    )
    return Outcome(
        injection,
        _combined(injection.modular.verdict, injection.weak.verdict),
        (GRID_CERTIFIED, WITNESS_RESTRICTED),
        {"modulars": "adaptive quadrature", "level_sets": "quadrature cell counting"},
    )


def _multiplier(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    phi1, phi2 = config.growth("phi1"), config.growth("phi2")
    source = config.context() if config.has("context") else WitnessContext("hardy")
    if source.kind == "hardy":
        target_alpha = config.number("alpha", 0.0)
        window = OmegaWindow.hardy(phi1, phi2, target_alpha)
    else:
        target_alpha = config.number("beta", 0.0)
        window = OmegaWindow.bergman(phi1, phi2, source.alpha, target_alpha)
    regime = regime_classify(phi1, phi2, window.source, window.target, config.scan_grid("regime"))
    result: "dict[str, Any]" = {"regime": regime}
    if config.has("multiplier"):
        z_grid = config.z_grid() or HalfPlaneGrid.dyadic((-6, 6))
        if source.kind == "hardy":
            family = [(f"F/{z.imag:.6e}", z.imag, hardy_test(z, phi1)) for z in z_grid.points()]
        else:
            family = [
                (f"G/{z.imag:.6e}", z.imag, bergman_test(z, phi1, source.alpha))
                for z in z_grid.points()
            ]
        result["product"] = multiplier_product_test(
            config.witness("multiplier"),
            family,  # type: ignore[arg-type]
            phi2,
            WitnessContext("bergman", target_alpha),
            window=window,
            z_grid=z_grid,
            cfg=config.quadrature(),
            threads=threads,
        )
    return Outcome(
        result,
        regime.regime,
        (GRID_CERTIFIED,),
        {"omega": "closed-form inverses where available, bisection otherwise"},
    )


def _oracle_validate(config: "RunConfig", threads: "Optional[int]") -> Outcome:
    triples = config.get("triples") or ORACLE_TRIPLES
    try:
        triples = [tuple(float(v) for v in triple) for triple in triples]
    except (TypeError, ValueError):
        raise InvalidInput("'triples' must be a list of [alpha, exponent, y]") from None
    if any(len(triple) != 3 for triple in triples):
        raise InvalidInput("'triples' must be a list of [alpha, exponent, y]")
    tolerance = config.number("tolerance", ORACLE_TOLERANCE)
    cfg = config.quadrature()
    checks = ordered_map(lambda triple: oracle_check(*triple, cfg=cfg), triples, threads)
    worst = max(check.relative_error for check in checks)
    return Outcome(
        {"checks": checks, "max_relative_error": worst, "tolerance": tolerance},
        "pass" if worst <= tolerance else "fail",
        provenance={"oracle": "Beta-function compositions", "computed": "adaptive quadrature"},
    )


COMMANDS: "dict[str, Callable[[RunConfig, Optional[int]], Outcome]]" = {
    "indices": _indices,
    "classify": _classify,
    "certify-box": _certify_box,
    "certify-berezin": _certify_berezin,
    "embed-check": _embed_check,
    "canonical": _canonical,
    "witness-test": _witness_test,
    "multiplier": _multiplier,
    "oracle-validate": _oracle_validate,
}


def run(
    command: str, config: "RunConfig", threads: "Optional[int]" = None
) -> CommandReport:
    """
    Run one command and wrap its outcome in a report.

    Toolkit errors become an ``error`` block with the error's exit status;
    the report is produced either way. Unknown commands raise.
    """
    try:
        handler = COMMANDS[command]
    except KeyError:
        raise UnknownCommand(
            f"unknown command {command!r}; expected one of {sorted(COMMANDS)}"
        ) from None
    logger.info("running %s", command)
    try:
        outcome = handler(config, threads)
    except CarlesonError as exc:
        logger.warning("%s failed: %s", command, exc)
        return CommandReport(
            command, config.as_dict(), error=exc.as_dict(), exit_status=exc.exit_status
        )
    return CommandReport(
        command,
        config.as_dict(),
        result=outcome.result,
        verdict=outcome.verdict,
        provenance=outcome.provenance,
        notes=outcome.notes,
    )
