import json
import math

from fractions import Fraction

import numpy as np

from django.test import SimpleTestCase

from carleson.exceptions import InvalidInput, RangeError
from carleson.reports import (
    CommandReport,
    Probe,
    Probes,
    Summary,
    format_number,
    to_json_value,
    validate_report,
)


class TestJsonValues(SimpleTestCase):
    def test_conversions(self) -> None:
        data = {
            "inf": math.inf,
            "nan": math.nan,
            "array": np.array([1.0, 2.5]),
            "scalar": np.float64(0.5),
            "fraction": Fraction(1, 3),
            "z": 1 + 2j,
            "nested": ({"x": -math.inf},),
        }
        self.assertEqual(
            to_json_value(data),
            {
                "inf": None,
                "nan": None,
                "array": [1.0, 2.5],
                "scalar": 0.5,
                "fraction": "1/3",
                "z": [1.0, 2.0],
                "nested": [{"x": None}],
            },
        )

    def test_objects_with_as_dict(self) -> None:
        probe = Probe("a", 1.0, math.inf)
        self.assertEqual(
            to_json_value(probe),
            {"id": "a", "parameter": 1.0, "value": None, "divergent": True, "excluded": False},
        )

    def test_format_number(self) -> None:
        self.assertEqual(format_number(None), "n/a")
        self.assertEqual(format_number(math.inf), "inf")
        self.assertEqual(format_number(1 / 3), "0.333333")


class TestProbes(SimpleTestCase):
    def setUp(self) -> None:
        self.probes = Probes(
            [
                Probe("b", 2.0, 3.0),
                Probe("a", None, 5.0),
                Probe("c", 4.0, math.nan, excluded=True),
            ]
        )

    def test_aggregates(self) -> None:
        self.assertEqual([p.probe_id for p in self.probes.sorted()], ["a", "b", "c"])
        self.assertEqual(self.probes.excluded, ["c"])
        self.assertTrue(self.probes.finite)
        self.assertEqual(self.probes.sup_estimate, 5.0)

    def test_trend_data_skips_probes_without_parameter(self) -> None:
        self.assertEqual(self.probes.trend_data(), ([2.0], [3.0]))

    def test_excluded_value_is_not_reported(self) -> None:
        self.assertIsNone(self.probes[2].as_dict()["value"])
        self.assertFalse(self.probes[2].as_dict()["divergent"])


class TestCommandReport(SimpleTestCase):
    def test_completed(self) -> None:
        report = CommandReport(
            "indices",
            {"phi": {"kind": "power", "p": 2}},
            result=Summary({"lower": 2.0, "upper": math.inf}),
            verdict="bounded",
            notes=("grid-certified",),
        )
        document = validate_report(report.render_json())
        self.assertEqual(document["status"], "completed")
        self.assertEqual(document["result"], {"lower": 2.0, "upper": None})
        self.assertEqual(document["exit_status"], 0)

    def test_json_is_deterministic(self) -> None:
        """Keys are sorted, so equal reports give byte-identical documents."""
        first = CommandReport("x", {"b": 1, "a": 2}, result={"z": 1, "y": [1, 2]})
        second = CommandReport("x", {"a": 2, "b": 1}, result={"y": [1, 2], "z": 1})
        self.assertEqual(first.render_json(), second.render_json())
        self.assertTrue(first.render_json().endswith("}\n"))
        self.assertLess(first.render_json().index('"a"'), first.render_json().index('"b"'))

    def test_error(self) -> None:
        error = RangeError("no bracket", (1e-12, 1e12))
        report = CommandReport("indices", {}, error=error.as_dict(), exit_status=error.exit_status)
        document = json.loads(report.render_json())
        self.assertEqual(document["status"], "error")
        self.assertEqual(document["error"]["kind"], "range-error")
        self.assertEqual(document["error"]["bracket"], [1e-12, 1e12])
        self.assertEqual(validate_report(document)["exit_status"], 2)

    def test_text_summary(self) -> None:
        report = CommandReport(
            "indices",
            {},
            result=Summary({"lower": 2.0, "upper": 2.0}),
            verdict="bounded",
            notes=("grid-certified",),
        )
        text = report.render_text()
        self.assertTrue(text.startswith("carleson indices: completed (bounded)\n"))
        self.assertIn("  lower: 2\n", text)
        self.assertIn("note: grid-certified\n", text)

    def test_text_summary_of_an_error(self) -> None:
        error = InvalidInput("configuration must be a JSON object")
        report = CommandReport("classify", {}, error=error.as_dict(), exit_status=2)
        self.assertIn(
            "error [invalid-input]: configuration must be a JSON object", report.render_text()
        )


class TestValidateReport(SimpleTestCase):
    def setUp(self) -> None:
        self.document = CommandReport("indices", {}, result={}).as_dict()

    def test_valid(self) -> None:
        self.assertEqual(validate_report(self.document), self.document)

    def test_invalid_documents(self) -> None:
        cases = {
            "not json": "{",
            "not an object": "[]",
            "missing key": {k: v for k, v in self.document.items() if k != "notes"},
            "wrong type": {**self.document, "exit_status": "0"},
            "bool status": {**self.document, "exit_status": True},
            "schema": {**self.document, "schema": "report_v0"},
            "status": {**self.document, "status": "running"},
            "error block": {**self.document, "status": "error"},
            "notes": {**self.document, "notes": [1]},
        }
        for name, document in cases.items():
            with self.subTest(name), self.assertRaises(InvalidInput):
                validate_report(document)  # type: ignore[arg-type]
