import math

from django.test import SimpleTestCase

from carleson.config import RunConfig
from carleson.exceptions import UnknownCommand
from carleson.reports import validate_report
from carleson.runner import COMMANDS, run
from carleson.test.example import runs


class RunnerTestMixin:
    def run_document(self, document: "dict") -> "dict":
        config = RunConfig.from_dict(document)
        report = run(config.command, config)  # type: ignore[arg-type]
        return validate_report(report.render_json())


class TestCommands(RunnerTestMixin, SimpleTestCase):
    def test_commands(self) -> None:
        self.assertEqual(
            sorted(COMMANDS),
            [
                "canonical",
                "certify-berezin",
                "certify-box",
                "classify",
                "embed-check",
                "indices",
                "multiplier",
                "oracle-validate",
                "witness-test",
            ],
        )

    def test_unknown_command(self) -> None:
        with self.assertRaises(UnknownCommand) as ctx:
            run("certify-everything", RunConfig.from_dict({}))
        self.assertEqual(ctx.exception.exit_status, 64)

    def test_indices(self) -> None:
        document = self.run_document(runs.INDICES)
        self.assertEqual(document["status"], "completed")
        self.assertAlmostEqual(document["result"]["lower"], 2.0, places=9)
        self.assertAlmostEqual(document["result"]["upper"], 2.0, places=9)
        self.assertEqual(document["inputs"], runs.INDICES)

    def test_classify(self) -> None:
        document = self.run_document(runs.CLASSIFY)
        self.assertIsNotNone(document["result"]["in_U"])
        self.assertIn("grid-certified", document["notes"][0])

    def test_certify_box(self) -> None:
        document = self.run_document(runs.CERTIFY_BOX)
        self.assertEqual(document["verdict"], "bounded")
        self.assertTrue(math.isclose(document["result"]["sup_estimate"], 1.0, rel_tol=1e-8))
        self.assertEqual(document["provenance"]["box_masses"], "closed form |I|^(2+alpha)/(1+alpha)")

    def test_certify_box_unbounded(self) -> None:
        document = self.run_document(runs.CERTIFY_BOX_UNBOUNDED)
        self.assertEqual(document["verdict"], "unbounded-trend")
        self.assertEqual(document["result"]["unbounded_end"], "low")

    def test_certify_berezin(self) -> None:
        document = self.run_document(runs.CERTIFY_BEREZIN)
        self.assertEqual(document["verdict"], "bounded")
        self.assertTrue(
            math.isclose(document["result"]["sup_estimate"], 5 * math.pi / 96, rel_tol=1e-6)
        )

    def test_embed_check_failure_is_not_an_error(self) -> None:
        document = self.run_document(runs.EMBED_CHECK_FAIL)
        self.assertEqual(document["verdict"], "fail")
        self.assertEqual(document["exit_status"], 0)
        self.assertIsNone(document["error"])

    def test_canonical(self) -> None:
        document = self.run_document(runs.CANONICAL)
        self.assertEqual(document["verdict"], "bounded")
        self.assertTrue(document["result"]["within_bound"])
        self.assertAlmostEqual(document["result"]["constant_bound"], 0.5, places=6)

    def test_multiplier(self) -> None:
        document = self.run_document(runs.MULTIPLIER)
        self.assertEqual(document["verdict"], "H_infinity")
        self.assertNotIn("product", document["result"])

    def test_oracle_validate(self) -> None:
        document = self.run_document(runs.ORACLE_VALIDATE)
        self.assertEqual(document["verdict"], "pass")
        self.assertLessEqual(document["result"]["max_relative_error"], 1e-6)

    def test_bad_density(self) -> None:
        """Malformed input is reported, not raised."""
        document = self.run_document(runs.BAD_DENSITY)
        self.assertEqual(document["status"], "error")
        self.assertEqual(document["exit_status"], 2)
        self.assertEqual(document["error"]["kind"], "syntax-error")
        self.assertEqual(document["error"]["offset"], 3)

    def test_missing_growth_function(self) -> None:
        document = self.run_document({"command": "indices"})
        self.assertEqual(document["error"]["kind"], "invalid-input")
        self.assertIsNone(document["result"])

    def test_malformed_fields(self) -> None:
        """Fields of the wrong shape are input errors, never crashes."""
        cases = {
            "atoms": {"measure": {"kind": "atomic", "points": 5}},
            "atom width": {"measure": {"kind": "atomic", "points": [[0, 1]]}},
            "density bounds": {"measure": {"kind": "density", "expr": "1", "bounds": 3}},
            "transform args": {"phi": {"kind": "transform", "transform": "compose", "args": 1}},
            "probe centers": {"grids": {"probes": {"length_exponents": [-2, 2], "centers": 3}}},
            "grid record": {"grids": {"probes": 7}},
            "tolerances": {"tolerances": {"quadrature": 5}},
        }
        for name, override in cases.items():
            with self.subTest(name):
                document = self.run_document({**runs.CERTIFY_BOX, **override})
                self.assertEqual(document["status"], "error")
                self.assertEqual(document["exit_status"], 2)
                self.assertEqual(document["error"]["kind"], "invalid-input")


class TestDeterminism(SimpleTestCase):
    def render(self, document: "dict", threads: int) -> str:
        config = RunConfig.from_dict(document)
        return run(config.command, config, threads).render_json()  # type: ignore[arg-type]

    def test_repeated_runs_are_identical(self) -> None:
        """Worker count and repetition leave the report bytes unchanged."""
        for document in (runs.CERTIFY_BOX_DENSITY, runs.CERTIFY_BEREZIN_DENSITY):
            with self.subTest(command=document["command"]):
                first = self.render(document, 1)
                self.assertEqual(validate_report(first)["status"], "completed")
                self.assertEqual(self.render(document, 4), first)
                self.assertEqual(self.render(document, 1), first)
