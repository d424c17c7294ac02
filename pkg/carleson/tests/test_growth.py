import math

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from carleson.exceptions import DomainError, InvalidInput, InvalidParameter, RangeError
from carleson.grids import ScanGrid
from carleson.growth import (
    Composite,
    PiecewisePower,
    Power,
    PowerLog,
    Reciprocal,
    Tabulated,
    classify,
    compose,
    compose_inverse,
    delta2_constant,
    dini_constant,
    estimate_indices,
    evaluate,
    inverse,
    invert,
    nabla2_doubling_constant,
    normalized_power_subst,
    power_subst,
    quotient_bound_check,
    quotient_monotone,
    reciprocal,
    transform,
    type_constant,
)
from carleson.tests.utils import NumericAssertionMixin


class TestEvaluate(NumericAssertionMixin, SimpleTestCase):
    def test_power_value(self) -> None:
        self.assertClose(evaluate(Power(2), 3), 9.0)

    def test_power_derivative(self) -> None:
        self.assertClose(evaluate(Power(3), 2, "derivative"), 12.0)

    def test_power_slope_ratio_is_homogeneous(self) -> None:
        self.assertClose(evaluate(Power(2.5), 7, "slope_ratio"), 2.5)

    def test_negative_argument(self) -> None:
        with self.assertRaises(DomainError):
            evaluate(Power(2), -1)

    def test_derivative_at_zero(self) -> None:
        """The derivative and slope ratio are only asked for on ``(0, inf)``."""
        with self.assertRaises(DomainError):
            evaluate(Power(2), 0, "derivative")
        with self.assertRaises(DomainError):
            evaluate(Power(2), 0, "slope_ratio")

    def test_value_at_zero(self) -> None:
        self.assertEqual(evaluate(PowerLog(2, 1), 0), 0.0)

    def test_non_finite_parameter(self) -> None:
        with self.assertRaises(InvalidInput):
            Power(math.inf)
        with self.assertRaises(InvalidInput):
            evaluate(Power(2), math.nan)

    def test_unknown_mode(self) -> None:
        with self.assertRaises(InvalidParameter):
            evaluate(Power(2), 1, "integral")

    def test_power_log_needs_admissible_log_exponent(self) -> None:
        with self.assertRaises(InvalidParameter):
            PowerLog(1, -2)


class TestInvert(NumericAssertionMixin, SimpleTestCase):
    def test_power(self) -> None:
        self.assertClose(invert(Power(2), 9), 3.0)

    def test_identity(self) -> None:
        self.assertClose(invert(Power(1), 5), 5.0)

    def test_power_log_by_bisection(self) -> None:
        """`PowerLog` has no closed-form inverse and is solved by bisection."""
        y = 4 * math.log(math.e + 2)
        self.assertClose(invert(PowerLog(2, 1), y), 2.0, rel=1e-9)

    def test_zero(self) -> None:
        self.assertEqual(invert(PowerLog(2, 1), 0), 0.0)

    def test_out_of_bracket(self) -> None:
        """A target beyond the inversion bracket reports the bracket it reached."""
        with self.assertRaises(RangeError) as ctx:
            invert(PowerLog(2, 1), 1e300)
        self.assertEqual(ctx.exception.bracket, (1e-12, 1e12))

    def test_piecewise_inverse_crosses_breakpoints(self) -> None:
        phi = PiecewisePower((1.0, 10.0), (1.0, 2.0, 3.0))
        for t in (0.5, 1.0, 3.0, 10.0, 40.0):
            self.assertClose(invert(phi, evaluate(phi, t)), t, rel=1e-9)

    @settings(derandomize=True, max_examples=50)
    @given(
        st.floats(min_value=0.2, max_value=6.0),
        st.floats(min_value=0.0, max_value=3.0),
        st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_power_log_inverse_solves_equation(self, p: float, a: float, y: float) -> None:
        """The bisected inverse satisfies ``phi(t) = y`` to the configured tolerance."""
        phi = PowerLog(p, a)
        t = invert(phi, y, tol=1e-9)
        self.assertClose(float(phi.value(t)), y, rel=1e-9)


class TestFamilies(NumericAssertionMixin, SimpleTestCase):
    def test_piecewise_is_continuous_at_breakpoints(self) -> None:
        phi = PiecewisePower((2.0,), (1.0, 3.0))
        self.assertClose(float(phi.value(2.0 - 1e-12)), float(phi.value(2.0)), rel=1e-9)
        self.assertClose(evaluate(phi, 4.0), 2.0 * (4.0 / 2.0) ** 3)

    def test_piecewise_validation(self) -> None:
        with self.assertRaises(InvalidParameter):
            PiecewisePower((2.0, 1.0), (1.0, 2.0, 3.0))
        with self.assertRaises(InvalidParameter):
            PiecewisePower((2.0,), (1.0,))

    def test_tabulated_interpolates_and_extends(self) -> None:
        phi = Tabulated((1.0, 2.0, 4.0), (1.0, 4.0, 16.0))
        self.assertClose(evaluate(phi, 3.0), 10.0)
        self.assertClose(evaluate(phi, 8.0), 64.0)
        self.assertClose(evaluate(phi, 0.5), 0.25)
        self.assertClose(invert(phi, 10.0), 3.0)

    def test_tabulated_requires_increasing_samples(self) -> None:
        with self.assertRaises(InvalidParameter):
            Tabulated((1.0, 2.0, 3.0), (1.0, 1.0, 2.0))

    def test_tabulated_warns_about_extreme_slopes(self) -> None:
        with self.assertLogs("carleson.growth", "WARNING"):
            Tabulated((1.0, 2.0, 3.0), (1.0, 1.0 + 1e-6, 1e6))


class TestTransforms(NumericAssertionMixin, SimpleTestCase):
    def test_compose_inverse_of_powers(self) -> None:
        self.assertEqual(compose_inverse(Power(4), Power(2)), Power(2))

    def test_power_subst(self) -> None:
        phi = power_subst(Power(3), 2)
        self.assertEqual(phi, Power(6))
        indices = estimate_indices(phi)
        self.assertClose(indices.lower, 6.0)
        self.assertClose(indices.upper, 6.0)

    def test_reciprocal_of_power(self) -> None:
        self.assertEqual(reciprocal(Power(3)), Power(3))

    def test_reciprocal_of_power_log(self) -> None:
        phi = reciprocal(PowerLog(2, 1))
        self.assertIsInstance(phi, Reciprocal)
        self.assertClose(evaluate(phi, 2.0), 1.0 / evaluate(PowerLog(2, 1), 0.5))
        self.assertEqual(evaluate(phi, 0.0), 0.0)
        self.assertIs(reciprocal(phi), phi.base)  # type: ignore[attr-defined]

    def test_compose_wraps_other_families(self) -> None:
        phi = compose(PowerLog(1, 1), Power(2))
        self.assertIsInstance(phi, Composite)
        self.assertClose(evaluate(phi, 3.0), 9 * math.log(math.e + 9))
        self.assertClose(invert(phi, evaluate(phi, 3.0)), 3.0, rel=1e-9)

    def test_inverse_of_inverse(self) -> None:
        base = PowerLog(2, 1)
        self.assertIs(inverse(inverse(base)), base)

    def test_normalized_power_subst(self) -> None:
        phi = normalized_power_subst(Power(4), 1.0)
        self.assertEqual(phi, Power(1))

    def test_transform_by_name(self) -> None:
        self.assertEqual(transform("compose_inverse", Power(4), Power(2)), Power(2))
        with self.assertRaises(InvalidParameter):
            transform("conjugate", Power(2))


class TestIndices(NumericAssertionMixin, SimpleTestCase):
    def test_power(self) -> None:
        indices = estimate_indices(Power(2))
        self.assertEqual((indices.lower, indices.upper), (2.0, 2.0))

    def test_inverse_indices_are_reciprocal(self) -> None:
        indices = estimate_indices(inverse(Power(4)))
        self.assertClose(indices.lower, 0.25)
        self.assertClose(indices.upper, 0.25)

    def test_power_log(self) -> None:
        """
        The slope ratio of ``t^2 log(e+t)`` tends to 2 at both ends.

        So the lower index sits at 2 and the upper index is attained inside
        the grid.
        """
        indices = estimate_indices(PowerLog(2, 1))
        self.assertClose(indices.lower, 2.0, abs=1e-3)
        self.assertGreater(indices.upper, 2.0)
        self.assertGreater(indices.upper_at, 1e-6)
        self.assertLess(indices.upper_at, 1e6)

    def test_grid_resolution(self) -> None:
        with self.assertRaises(InvalidParameter):
            estimate_indices(Power(2), ScanGrid(1e-2, 1e2, 512))
        with self.assertRaises(InvalidParameter):
            estimate_indices(Power(2), ScanGrid(1e-6, 1e6, 50))


class TestClassify(NumericAssertionMixin, SimpleTestCase):
    def test_power_2(self) -> None:
        report = classify(Power(2))
        self.assertEqual(report.in_U, 2.0)
        self.assertIsNone(report.in_L)
        self.assertTrue(report.nabla2.holds)
        self.assertClose(report.nabla2.constant, 1.0, rel=1e-6)  # type: ignore[arg-type]
        self.assertTrue(report.in_U_and_nabla2)
        self.assertTrue(report.in_U_tilde)
        self.assertClose(report.delta2.constant, 4.0)  # type: ignore[arg-type]

    def test_power_1_fails_nabla2(self) -> None:
        report = classify(Power(1))
        self.assertEqual(report.in_U, 1.0)
        self.assertFalse(report.nabla2.holds)
        self.assertIn("divergent", report.nabla2.flags)
        self.assertFalse(report.in_U_and_nabla2)

    def test_power_half_is_in_lower_class(self) -> None:
        report = classify(Power(0.5))
        self.assertEqual(report.in_L, 0.5)
        self.assertIsNone(report.in_U)
        self.assertTrue(report.tilde_conditions["lower_type"].holds)
        self.assertClose(report.tilde_conditions["lower_type"].constant, 1.0, rel=1e-9)  # type: ignore[arg-type]

    def test_report_serializes(self) -> None:
        data = classify(PowerLog(2, 1)).as_dict()
        self.assertIn("in_U_and_nabla2", data)
        self.assertEqual(set(data["tilde_conditions"]), {
            "submultiplicative",
            "upper_quotient",
            "lower_quotient",
            "upper_type",
            "lower_type",
        })


class TestDini(NumericAssertionMixin, SimpleTestCase):
    def test_power_2(self) -> None:
        result = dini_constant(Power(2), Power(2))
        self.assertTrue(result.holds)
        self.assertClose(result.constant, 1.0, rel=1e-6)  # type: ignore[arg-type]

    def test_power_three_halves(self) -> None:
        """``int_0^t s^(-1/2) ds = 2 sqrt(t)`` so the constant is 2."""
        result = dini_constant(Power(1.5), Power(1.5))
        self.assertClose(result.constant, 2.0, rel=1e-6)  # type: ignore[arg-type]

    def test_unbounded_ratio(self) -> None:
        result = dini_constant(Power(1), Power(2))
        self.assertFalse(result.holds)
        self.assertEqual(result.trend, "high")

    def test_unbounded_towards_zero(self) -> None:
        result = dini_constant(Power(3), Power(2))
        self.assertFalse(result.holds)
        self.assertEqual(result.trend, "low")

    def test_divergent(self) -> None:
        result = dini_constant(Power(1), Power(1))
        self.assertTrue(result.divergent)
        self.assertIsNone(result.constant)


class TestQuotients(NumericAssertionMixin, SimpleTestCase):
    def test_monotone(self) -> None:
        self.assertTrue(quotient_monotone(Power(2), Power(4)).passed)
        self.assertTrue(quotient_monotone(Power(1), PowerLog(1, 1)).passed)

    def test_not_monotone(self) -> None:
        verdict = quotient_monotone(Power(4), Power(2))
        self.assertFalse(verdict.passed)
        self.assertIsNotNone(verdict.location)

    def test_quotient_bound(self) -> None:
        check = quotient_bound_check(Power(2))
        self.assertTrue(check.holds)
        self.assertClose(check.constant, 1.0, rel=1e-9)  # type: ignore[arg-type]

    def test_delta2_of_power_log_is_finite(self) -> None:
        check = delta2_constant(PowerLog(2, 1))
        self.assertTrue(check.holds)
        self.assertLess(check.constant, 8.0)  # type: ignore[arg-type]

    def test_nabla2_doubling(self) -> None:
        check = nabla2_doubling_constant(Power(2))
        self.assertTrue(check.holds)
        self.assertEqual(check.constant, 2.0)

    def test_nabla2_doubling_fails_for_linear_growth(self) -> None:
        check = nabla2_doubling_constant(Power(1))
        self.assertFalse(check.holds)
        self.assertEqual(check.flags, ("no-candidate",))


class TestTypeConstant(NumericAssertionMixin, SimpleTestCase):
    def test_exact_type(self) -> None:
        for kind in ("upper", "lower"):
            with self.subTest(kind=kind):
                check = type_constant(Power(2), 2, kind)
                self.assertTrue(check.holds)
                self.assertClose(check.constant, 1.0, rel=1e-9)  # type: ignore[arg-type]

    def test_upper_type_too_small(self) -> None:
        check = type_constant(Power(3), 2)
        self.assertFalse(check.holds)
        self.assertEqual(check.name, "upper_type")

    def test_unknown_kind(self) -> None:
        with self.assertRaises(InvalidParameter):
            type_constant(Power(2), 2, "middle")
