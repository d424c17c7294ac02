import math

import numpy as np

from django.test import SimpleTestCase

from carleson.exceptions import AccuracyFailure, InvalidInput, InvalidParameter
from carleson.quadrature import (
    ORACLE_TRIPLES,
    Atomic,
    Box,
    CarlesonSquare,
    Density,
    Envelope,
    Integrand,
    Interval,
    LebesgueAlpha,
    QuadratureConfig,
    Truncation,
    beta_value,
    box_volume,
    integrate,
    measure_of_square,
    oracle_check,
    oracle_kernel_integral,
    oracle_line_integral,
    oracle_vertical_integral,
    tail_bound,
)
from carleson.tests.utils import NumericAssertionMixin


def ones(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.ones_like(np.asarray(x, dtype=float))


class TestGeometry(NumericAssertionMixin, SimpleTestCase):
    def test_box_volume(self) -> None:
        self.assertClose(box_volume(Interval(0, 2), 0), 4.0)
        self.assertClose(box_volume(Interval(0, 1), 1), 0.5)
        self.assertClose(box_volume(Interval(0, 4), -0.5), 16.0)

    def test_box_volume_rejects_alpha(self) -> None:
        with self.assertRaises(InvalidParameter):
            box_volume(Interval(0, 1), -1)

    def test_interval(self) -> None:
        interval = Interval.from_endpoints(-1, 3)
        self.assertEqual((interval.center, interval.length), (1.0, 4.0))
        self.assertTrue(interval.contains_interval(Interval(0, 1)))
        with self.assertRaises(InvalidParameter):
            Interval(0, 0)
        with self.assertRaises(InvalidInput):
            Interval(math.nan, 1)

    def test_square_is_half_open(self) -> None:
        square = CarlesonSquare(Interval.from_endpoints(0, 1))
        inside = square.contains(np.array([0.0, 0.5, 1.0, 0.5]), np.array([0.5, 0.99, 0.5, 0.0]))
        self.assertEqual(inside.tolist(), [True, True, False, False])

    def test_box_intersection(self) -> None:
        box = Box(0, 2, 0, 2).intersect(Box(1, 3, 1, 3))
        self.assertEqual(box, Box(1, 2, 1, 2))
        self.assertIsNone(Box(0, 1, 0, 1).intersect(Box(2, 3, 0, 1)))
        with self.assertRaises(InvalidParameter):
            Box(0, 1, -1, 1)


class TestOracles(NumericAssertionMixin, SimpleTestCase):
    def test_beta(self) -> None:
        self.assertClose(beta_value(0.5, 0.5), math.pi, rel=1e-12)
        self.assertClose(beta_value(1, 2), 0.5, rel=1e-12)
        self.assertClose(beta_value(0.5, 3.5), 5 * math.pi / 16, rel=1e-12)

    def test_beta_rejects_nonpositive(self) -> None:
        with self.assertRaises(InvalidParameter):
            beta_value(0, 1)

    def test_line_integral(self) -> None:
        self.assertClose(oracle_line_integral(2, 1).value, math.pi, rel=1e-12)
        self.assertClose(oracle_line_integral(4, 2).value, math.pi / 16, rel=1e-12)
        self.assertTrue(oracle_line_integral(1, 1).divergent)

    def test_vertical_integral(self) -> None:
        self.assertClose(oracle_vertical_integral(0, 3, 1).value, 0.5, rel=1e-12)
        self.assertClose(oracle_vertical_integral(0, 7, 3).value, 3.0**-6 / 6, rel=1e-12)
        self.assertTrue(oracle_vertical_integral(-0.5, 0, 1).divergent)

    def test_kernel_integral(self) -> None:
        self.assertClose(oracle_kernel_integral(0, 4, 1).value, math.pi / 4, rel=1e-12)
        self.assertTrue(oracle_kernel_integral(0, 2, 1).divergent)
        self.assertEqual(oracle_kernel_integral(0, 2, 1).as_dict()["value"], None)

    def test_tail_bound(self) -> None:
        bound = tail_bound(Envelope(1.0, 4.0), 2.0, [(1.0, 0.0)])
        self.assertClose(bound, math.pi / 8, rel=1e-12)
        self.assertEqual(tail_bound(Envelope(1.0, 2.0), 2.0, [(1.0, 0.0)]), math.inf)


class TestIntegrate(NumericAssertionMixin, SimpleTestCase):
    def test_kernel_against_area(self) -> None:
        integrand = Integrand(
            func=lambda x, y: np.power(np.hypot(x, y + 1), -4),
            envelope=Envelope(1.0, 4.0),
        )
        result = integrate(LebesgueAlpha(0), integrand)
        self.assertClose(result.value, math.pi / 4, rel=1e-6)
        self.assertLessEqual(result.tail_bound, result.error_estimate)
        self.assertTrue(result.bottom.startswith("jacobi"))

    def test_weighted_kernel_uses_jacobi_bottom(self) -> None:
        integrand = Integrand(
            func=lambda x, y: np.power(np.hypot(x, y + 1), -5),
            envelope=Envelope(1.0, 5.0),
        )
        result = integrate(LebesgueAlpha(-0.5), integrand)
        expected = oracle_kernel_integral(-0.5, 5, 1).value
        self.assertClose(result.value, expected, rel=1e-6)

    def test_atom(self) -> None:
        result = integrate(Atomic(((0.0, 1.0, 2.0),)), ones)
        self.assertEqual(result.value, 2.0)

    def test_indicator_of_square(self) -> None:
        square = CarlesonSquare(Interval.from_endpoints(-1, 1))
        result = integrate(LebesgueAlpha(0), ones, support=square.box)
        self.assertClose(result.value, box_volume(square.base, 0), rel=1e-10)

    def test_rule_weights_carry_the_density(self) -> None:
        """The returned rule integrates other functions against the same measure."""
        measure = Density(lambda x, y: y, y_exponent=1.0)
        result = integrate(measure, ones, support=Box(0, 1, 0, 1))
        assert result.rule is not None
        self.assertClose(result.rule.apply(lambda x, y: y), 1 / 3, rel=1e-8)
        self.assertClose(result.rule.measure_where(result.rule.x < 2), 0.5, rel=1e-8)

    def test_whole_plane_needs_decay(self) -> None:
        with self.assertRaises(InvalidInput):
            integrate(LebesgueAlpha(0), Integrand(func=ones))

    def test_slow_decay(self) -> None:
        integrand = Integrand(func=ones, envelope=Envelope(1.0, 2.0))
        with self.assertRaises(InvalidParameter):
            integrate(LebesgueAlpha(0), integrand)

    def test_density_without_bounds_needs_truncation(self) -> None:
        measure = Density(lambda x, y: np.exp(-y), y_exponent=0.0)
        integrand = Integrand(func=ones, envelope=Envelope(1.0, 4.0))
        with self.assertRaises(InvalidInput):
            integrate(measure, integrand)

        cfg = QuadratureConfig(truncation=Truncation(10.0, 0.0, 50.0))
        with self.assertLogs("carleson.quadrature", "WARNING"):
            result = integrate(measure, Integrand(func=lambda x, y: np.exp(-x * x)), cfg)
        self.assertClose(result.value, math.sqrt(math.pi), rel=1e-6)
        self.assertTrue(math.isnan(result.tail_bound))

    def test_density_above_floor(self) -> None:
        measure = Density(lambda x, y: y**-3, y_min=1.0)
        result = integrate(measure, ones, support=Box(0, 1, 0, 2))
        self.assertClose(result.value, 0.5 - 0.125, rel=1e-8)
        self.assertTrue(result.bottom.startswith("floor"))

    def test_accuracy_failure_carries_partial_value(self) -> None:
        cfg = QuadratureConfig(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=1)
        disc = Integrand(
            func=lambda x, y: (np.hypot(x, y) < 1).astype(float),
            support=Box(-2, 2, 0, 2),
        )
        with self.assertRaises(AccuracyFailure) as ctx:
            integrate(LebesgueAlpha(0), disc, cfg)
        self.assertTrue(math.isfinite(ctx.exception.partial_value))
        self.assertGreater(ctx.exception.error_estimate, 0)


class TestMeasureOfSquare(NumericAssertionMixin, SimpleTestCase):
    def test_lebesgue_alpha(self) -> None:
        square = CarlesonSquare(Interval.from_endpoints(0, 1))
        self.assertClose(measure_of_square(LebesgueAlpha(1), square), 0.5)

    def test_atom_inside(self) -> None:
        square = CarlesonSquare(Interval.from_endpoints(0, 1))
        self.assertEqual(measure_of_square(Atomic(((0.1, 0.1, 3.0),)), square), 3.0)
        self.assertEqual(measure_of_square(Atomic(((2.0, 0.1, 3.0),)), square), 0.0)

    def test_atoms_on_the_edges(self) -> None:
        """Squares are half-open: the left edge belongs, the right and top edges do not."""
        square = CarlesonSquare(Interval.from_endpoints(0, 1))
        atoms = {(0.0, 0.5): 1.0, (1.0, 0.5): 0.0, (0.5, 1.0): 0.0}
        for (x, y), expected in atoms.items():
            measure = Atomic(((x, y, 1.0),))
            with self.subTest(x=x, y=y):
                self.assertEqual(measure_of_square(measure, square), expected)
                self.assertEqual(integrate(measure, ones, support=square.box).value, expected)

    def test_density(self) -> None:
        square = CarlesonSquare(Interval.from_endpoints(0, 1))
        measure = Density(lambda x, y: y, y_exponent=1.0)
        self.assertClose(measure_of_square(measure, square), 0.5, rel=1e-10)

    def test_atoms_are_validated(self) -> None:
        with self.assertRaises(InvalidParameter):
            Atomic(((0.0, 0.0, 1.0),))
        with self.assertRaises(InvalidParameter):
            Atomic(((0.0, 1.0, -1.0),))


class TestOracleCheck(SimpleTestCase):
    def test_calibration_triples(self) -> None:
        """Adaptive quadrature reproduces every Beta-function oracle to 1e-6."""
        for alpha, exponent, y in ORACLE_TRIPLES:
            with self.subTest(alpha=alpha, exponent=exponent, y=y):
                check = oracle_check(alpha, exponent, y)
                self.assertLessEqual(check.relative_error, 1e-6)

    def test_divergent_triple(self) -> None:
        with self.assertRaises(InvalidParameter):
            oracle_check(0.0, 2.0, 1.0)
