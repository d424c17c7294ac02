import math

from django.test import SimpleTestCase

from carleson.exceptions import ExpressionSyntaxError, InvalidInput
from carleson.expressions import LINE_VARIABLES, parse_expression, tokenize


class TestParse(SimpleTestCase):
    def test_tree(self) -> None:
        self.assertEqual(
            parse_expression("1/(y^2)").tree(), ("div", 1.0, ("pow", "y", 2.0))
        )

    def test_power_is_right_associative(self) -> None:
        self.assertEqual(
            parse_expression("2^3^2").tree(), ("pow", 2.0, ("pow", 3.0, 2.0))
        )
        self.assertEqual(parse_expression("2**3").tree(), ("pow", 2.0, 3.0))

    def test_power_binds_tighter_than_minus(self) -> None:
        self.assertEqual(parse_expression("-y^2").tree(), ("neg", ("pow", "y", 2.0)))
        self.assertEqual(parse_expression("y^-2").tree(), ("pow", "y", ("neg", 2.0)))

    def test_precedence(self) -> None:
        self.assertEqual(
            parse_expression("1 + 2*x - y").tree(),
            ("sub", ("add", 1.0, ("mul", 2.0, "x")), "y"),
        )

    def test_functions_and_constants(self) -> None:
        expression = parse_expression("y^(-0.5)*exp(-x*x)")
        self.assertEqual(expression.tree()[0], "mul")
        self.assertAlmostEqual(float(expression(1.0, 4.0)), 0.5 / math.e)
        self.assertEqual(parse_expression("pi").tree(), math.pi)


class TestSyntaxErrors(SimpleTestCase):
    def assertSyntaxError(self, source: str, offset: int) -> ExpressionSyntaxError:
        with self.assertRaises(ExpressionSyntaxError) as ctx:
            parse_expression(source)
        self.assertEqual(ctx.exception.offset, offset)
        return ctx.exception

    def test_unterminated(self) -> None:
        error = self.assertSyntaxError("1/(", 3)
        self.assertIn("number", error.expected)
        self.assertEqual(error.exit_status, 2)

    def test_missing_close(self) -> None:
        error = self.assertSyntaxError("(1", 2)
        self.assertEqual(error.expected, (")",))

    def test_unknown_name(self) -> None:
        self.assertSyntaxError("x + z", 4)

    def test_unexpected_character(self) -> None:
        self.assertSyntaxError("2 $ 3", 2)

    def test_trailing_operand(self) -> None:
        self.assertSyntaxError("x y", 2)

    def test_empty(self) -> None:
        self.assertSyntaxError("   ", 0)

    def test_variables_are_restricted(self) -> None:
        """Boundary data is written in ``t``; ``x`` is not a name there."""
        parse_expression("exp(-t*t)", LINE_VARIABLES)
        with self.assertRaises(ExpressionSyntaxError):
            parse_expression("x", LINE_VARIABLES)

    def test_error_report(self) -> None:
        error = self.assertSyntaxError("1/(", 3)
        data = error.as_dict()
        self.assertEqual(data["kind"], "syntax-error")
        self.assertEqual(data["offset"], 3)


class TestEvaluate(SimpleTestCase):
    def test_non_finite_result(self) -> None:
        with self.assertRaises(InvalidInput):
            parse_expression("1/y").evaluate(x=0.0, y=0.0)

    def test_unknown_variable(self) -> None:
        with self.assertRaises(InvalidInput):
            parse_expression("x").evaluate(t=1.0)

    def test_broadcasts(self) -> None:
        values = parse_expression("2")([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
        self.assertEqual(values.tolist(), [2.0, 2.0, 2.0])

    def test_tokens(self) -> None:
        tokens = tokenize("x ** 2")
        self.assertEqual([t.text for t in tokens], ["x", "**", "2", ""])
        self.assertEqual([t.offset for t in tokens], [0, 2, 5, 6])
