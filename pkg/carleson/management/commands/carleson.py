import logging
import sys

from typing import TYPE_CHECKING

from django.core.management.base import BaseCommand, CommandError, CommandParser

from carleson.config import load_config
from carleson.exceptions import CarlesonError
from carleson.reports import CommandReport
from carleson.runner import COMMANDS, run


if TYPE_CHECKING:
    from argparse import ArgumentParser
    from typing import Any, NoReturn


USAGE_ERROR = 64


class UsageParser(CommandParser):
    """Report argument errors with the usage exit status."""

    def error(self, message: str) -> "NoReturn":
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=USAGE_ERROR)


class Command(BaseCommand):
    help = (
        "Run one certification command on a JSON run configuration and emit "
        "a report_v1 document."
    )

    def create_parser(self, prog_name: str, subcommand: str, **kwargs: "Any") -> CommandParser:
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # Only error reporting changes; construction stays with Django.
        parser.__class__ = UsageParser
        return parser

    def add_arguments(self, parser: "ArgumentParser") -> None:
        parser.add_argument(
            "subcommand",
            metavar="command",
            help=f"One of: {', '.join(COMMANDS)}.",
        )
        parser.add_argument(
            "--config",
            required=True,
            help="Path of the JSON run configuration.",
        )
        parser.add_argument(
            "--out",
            help="Write the JSON report here and print the text summary instead.",
        )
        parser.add_argument(
            "--threads",
            type=int,
            default=None,
            help="Worker threads for probe and per-point evaluations.",
        )

    def handle(self, *args: "Any", **options: "Any") -> None:
        if options["verbosity"] >= 3:
            logging.getLogger("carleson").setLevel(logging.DEBUG)

        command = options["subcommand"]
        if command not in COMMANDS:
            raise CommandError(
                f"Unknown command {command!r}. Expected one of: {', '.join(COMMANDS)}.",
                returncode=USAGE_ERROR,
            )
        threads = options["threads"]
        if threads is not None and threads < 1:
            raise CommandError("--threads must be at least 1.", returncode=2)

        try:
            config = load_config(options["config"])
        except CarlesonError as exc:
            report = CommandReport(
                command,
                {"config": options["config"]},
                error=exc.as_dict(),
                exit_status=exc.exit_status,
            )
            output = options["out"]
        else:
            report = run(command, config, threads)
            output = options["out"] or config.output

        self.emit(report, output)
        if report.exit_status:
            raise CommandError(
                f"{command} failed: {report.error['message']}"  # type: ignore[index]
                if report.error
                else f"{command} failed.",
                returncode=report.exit_status,
            )

    def emit(self, report: CommandReport, output: "str | None") -> None:
        if output is None:
            self.stdout.write(report.render_json(), ending="")
            return
        with open(output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(report.render_json())
        self.stdout.write(report.render_text(), ending="")
