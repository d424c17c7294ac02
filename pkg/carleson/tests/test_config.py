import json
import os
import tempfile

from django.test import SimpleTestCase

from carleson.config import (
    RunConfig,
    build_context,
    build_growth,
    build_measure,
    build_witness,
    load_config,
)
from carleson.exceptions import ExpressionSyntaxError, InvalidInput, InvalidParameter
from carleson.functions import ConstantFunction, StepFunction
from carleson.growth import PiecewisePower, Power, PowerLog, Tabulated
from carleson.quadrature import Atomic, CarlesonSquare, Density, Interval, LebesgueAlpha
from carleson.test.example import runs
from carleson.tests.utils import NumericAssertionMixin
from carleson.witnesses import BergmanTest, HardyTest, PoissonWitness, PowerWitness


class TestBuildGrowth(SimpleTestCase):
    def test_kinds(self) -> None:
        self.assertEqual(build_growth({"kind": "power", "p": 2}), Power(2))
        self.assertEqual(build_growth({"kind": "power_log", "p": 2}), PowerLog(2, 1))
        self.assertIsInstance(
            build_growth({"kind": "piecewise", "breakpoints": [1], "exponents": [1, 2]}),
            PiecewisePower,
        )
        self.assertIsInstance(
            build_growth({"kind": "tabulated", "t": [1, 2, 4], "values": [1, 4, 16]}),
            Tabulated,
        )

    def test_transform(self) -> None:
        phi = build_growth(
            {"kind": "transform", "transform": "compose", "args": [runs.POWER_2, runs.POWER_3]}
        )
        self.assertAlmostEqual(float(phi.value(2.0)), 64.0)
        with self.assertRaises(InvalidParameter):
            build_growth({"kind": "transform", "transform": "product", "args": []})

    def test_invalid(self) -> None:
        cases = [
            {"p": 2},
            {"kind": "power"},
            {"kind": "power", "p": "two"},
            {"kind": "power", "p": True},
            {"kind": "power", "p": float("inf")},
            {"kind": "exponential"},
            "power",
        ]
        for record in cases:
            with self.subTest(record=record), self.assertRaises(InvalidInput):
                build_growth(record)  # type: ignore[arg-type]


class TestBuildMeasure(NumericAssertionMixin, SimpleTestCase):
    def setUp(self) -> None:
        self.square = CarlesonSquare(Interval.from_endpoints(0, 1))

    def test_lebesgue(self) -> None:
        measure = build_measure({"kind": "lebesgue_alpha", "alpha": 1})
        self.assertIsInstance(measure, LebesgueAlpha)
        self.assertClose(measure.of_square(self.square), 0.5)

    def test_density(self) -> None:
        measure = build_measure(
            {"kind": "density", "expr": "y", "y_exponent": 1, "bounds": [[1, 1], [1, 1]]}
        )
        self.assertIsInstance(measure, Density)
        self.assertClose(measure.of_square(self.square), 0.5, rel=1e-8)

    def test_density_syntax_error(self) -> None:
        with self.assertRaises(ExpressionSyntaxError) as ctx:
            build_measure(runs.BAD_DENSITY["measure"])  # type: ignore[arg-type]
        self.assertEqual(ctx.exception.offset, 3)

    def test_density_variables(self) -> None:
        with self.assertRaises(ExpressionSyntaxError):
            build_measure({"kind": "density", "expr": "t"})

    def test_atomic(self) -> None:
        measure = build_measure({"kind": "atomic", "points": [[0.5, 0.5, 2], [3, 1, 1]]})
        self.assertIsInstance(measure, Atomic)
        self.assertEqual(measure.of_square(self.square), 2.0)

    def test_canonical(self) -> None:
        measure = build_measure({"kind": "canonical", "phi": runs.POWER_2, "s": 1})
        self.assertClose(measure.of_square(self.square), 1.0, rel=1e-8)

    def test_invalid(self) -> None:
        with self.assertRaises(InvalidInput):
            build_measure({"kind": "counting"})
        with self.assertRaises(InvalidInput):
            build_measure({"kind": "atomic", "points": [[0, "a", 1]]})
        with self.assertRaises(InvalidParameter):
            build_measure({"kind": "lebesgue_alpha", "alpha": -1})


class TestBuildWitness(SimpleTestCase):
    def test_kinds(self) -> None:
        self.assertIsInstance(
            build_witness({"kind": "hardy_test", "z": [0, 1], "phi": runs.POWER_2}), HardyTest
        )
        bergman = build_witness(
            {"kind": "bergman_test", "z": [0, 1], "phi": runs.POWER_4, "alpha": 1, "factor": 2}
        )
        self.assertIsInstance(bergman, BergmanTest)
        self.assertEqual(bergman.alpha, 1.0)  # type: ignore[attr-defined]
        self.assertEqual(bergman.factor, 2.0)  # type: ignore[attr-defined]
        self.assertIsInstance(build_witness({"kind": "power", "a": 2}), PowerWitness)
        self.assertEqual(build_witness({"kind": "constant", "value": 3, "factor": 2}), ConstantFunction(6.0))

    def test_poisson(self) -> None:
        witness = build_witness({"kind": "poisson", "boundary": {"pieces": [[0, 1, 1]]}})
        self.assertIsInstance(witness, PoissonWitness)
        self.assertEqual(witness.boundary, StepFunction.indicator(0, 1))  # type: ignore[attr-defined]
        with self.assertRaises(InvalidInput):
            build_witness({"kind": "poisson", "boundary": {"expr": "exp(-t*t)"}})
        for boundary in (5, {"pieces": 5}, {"pieces": [[0, 1]]}):
            with self.subTest(boundary=boundary), self.assertRaises(InvalidInput):
                build_witness({"kind": "poisson", "boundary": boundary})

    def test_expression(self) -> None:
        witness = build_witness(
            {"kind": "expression", "expr": "1/(x^2 + (y+1)^2)", "envelope": {"amplitude": 1, "decay": 2}}
        )
        self.assertAlmostEqual(witness.at(1j), 0.25)
        self.assertEqual(witness.envelope.decay, 2.0)  # type: ignore[union-attr]

    def test_invalid(self) -> None:
        with self.assertRaises(InvalidInput):
            build_witness({"kind": "hardy_test", "z": 1, "phi": runs.POWER_2})
        with self.assertRaises(InvalidInput):
            build_witness({"kind": "gaussian"})

    def test_context(self) -> None:
        self.assertEqual(build_context("hardy").s, 1.0)
        self.assertEqual(build_context({"kind": "bergman", "alpha": 1}).s, 3.0)
        with self.assertRaises(InvalidParameter):
            build_context("dirichlet")


class TestRunConfig(SimpleTestCase):
    def test_accessors(self) -> None:
        config = RunConfig.from_dict(runs.CERTIFY_BOX)
        self.assertEqual(config.command, "certify-box")
        self.assertEqual(config.growth(), Power(2))
        self.assertEqual(config.number("s"), 1.0)
        self.assertEqual(config.number("rho", 1.0), 1.0)
        self.assertIsNone(config.optional_number("rho"))
        self.assertEqual(config.probe_family().length_exponents, (-6, 6))  # type: ignore[union-attr]
        self.assertIsNone(config.z_grid())
        self.assertIsNone(config.quadrature())

    def test_missing_keys(self) -> None:
        config = RunConfig.from_dict({})
        with self.assertRaises(InvalidInput):
            config.growth("phi1")
        with self.assertRaises(InvalidInput):
            config.number("s")

    def test_invalid_documents(self) -> None:
        for document in ([], {"command": 3}, {"output": ["a"]}):
            with self.subTest(document=document), self.assertRaises(InvalidInput):
                RunConfig.from_dict(document)
        with self.assertRaises(InvalidInput):
            RunConfig.from_dict({"grids": []}).z_grid()

    def test_quadrature_tolerances(self) -> None:
        config = RunConfig.from_dict({"tolerances": {"quadrature": {"rel_tol": 1e-6}}})
        self.assertEqual(config.quadrature().rel_tol, 1e-6)  # type: ignore[union-attr]


class TestLoadConfig(SimpleTestCase):
    def setUp(self) -> None:
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.directory.name, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def test_load(self) -> None:
        config = load_config(self.write("run.json", json.dumps(runs.INDICES)))
        self.assertEqual(config.command, "indices")

    def test_unreadable(self) -> None:
        with self.assertRaises(InvalidInput):
            load_config(os.path.join(self.directory.name, "missing.json"))

    def test_bad_json(self) -> None:
        with self.assertRaises(InvalidInput):
            load_config(self.write("bad.json", "{"))
