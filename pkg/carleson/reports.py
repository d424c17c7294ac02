"""
Report objects.

Reports render themselves twice: as the ``report_v1`` JSON document (the
machine-readable artefact of every command) and as a short text summary
through a Django template, the way a component renders its HTML.
"""

import json
import math

from fractions import Fraction
from typing import TYPE_CHECKING, List

import numpy as np

from django.core.serializers.json import DjangoJSONEncoder
from django.template.loader import get_template

from carleson.exceptions import InvalidInput


if TYPE_CHECKING:
    from typing import Any, Optional, Sequence

    from carleson.typing import RenderContext


SCHEMA = "report_v1"

STATUSES = ("completed", "error")

REQUIRED_KEYS: "dict[str, tuple[type, ...]]" = {
    "schema": (str,),
    "command": (str,),
    "status": (str,),
    "exit_status": (int,),
    "inputs": (dict,),
    "result": (dict, type(None)),
    "verdict": (str, type(None)),
    "provenance": (dict,),
    "notes": (list,),
    "error": (dict, type(None)),
}


def to_json_value(value: "Any") -> "Any":
    """
    Turn report data into values ``json`` can write without ``NaN``.

    Non-finite floats become ``None``; reports carry explicit flags
    (``divergent``, ``in_space``) for those cases.
    """
    if hasattr(value, "as_dict") and not isinstance(value, type):
        return to_json_value(value.as_dict())
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_json_value(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return to_json_value(value.item())
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [to_json_value(value.real), to_json_value(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def format_number(value: "Optional[float]") -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return f"{value:.6g}"


class Report:
    """
    A result that knows how to render itself.

    Subclasses set ``template_name`` and implement :meth:`as_dict`; the text
    summary is rendered from :meth:`get_context_data`.
    """

    template_name: str = "carleson/reports/summary.txt"

    def as_dict(self) -> "dict[str, Any]":
        raise NotImplementedError

    def render_text(self, parent_context: "Optional[RenderContext]" = None) -> str:
        context_data = self.get_context_data(parent_context)
        if context_data is None:
            raise TypeError("Expected a dict from get_context_data, got None")

        template = get_template(self.template_name)
        return template.render(context_data)

    def get_context_data(
        self, parent_context: "Optional[RenderContext]" = None
    ) -> "Optional[RenderContext]":
        data = to_json_value(self.as_dict())
        return {
            "items": [
                (key, format_number(value) if isinstance(value, float) else value)
                for key, value in sorted(data.items())
                if not isinstance(value, (dict, list))
            ]
        }


class Probe:
    """One member of a probe family: its id, the trend parameter and the value."""

    def __init__(
        self,
        probe_id: str,
        parameter: "Optional[float]",
        value: float,
        excluded: bool = False,
        error: "Optional[dict[str, Any]]" = None,
        details: "Optional[dict[str, Any]]" = None,
    ) -> None:
        self.probe_id = probe_id
        self.parameter = parameter
        self.value = value
        self.excluded = excluded
        self.error = error
        self.details = details or {}

    def __repr__(self) -> str:
        return f"Probe({self.probe_id!r}, {self.parameter!r}, {self.value!r})"

    def as_dict(self) -> "dict[str, Any]":
        data: "dict[str, Any]" = {
            "id": self.probe_id,
            "parameter": self.parameter,
            "value": None if self.excluded else self.value,
            "divergent": not self.excluded and math.isinf(self.value),
            "excluded": self.excluded,
        }
        if self.error is not None:
            data["error"] = self.error
        if self.details:
            data["details"] = self.details
        return data


class Probes(List[Probe]):
    """A list of probes that aggregates their values."""

    def sorted(self) -> "Probes":
        return Probes(sorted(self, key=lambda probe: probe.probe_id))

    @property
    def included(self) -> "list[Probe]":
        return [probe for probe in self if not probe.excluded]

    @property
    def excluded(self) -> "list[str]":
        return [probe.probe_id for probe in self if probe.excluded]

    @property
    def finite(self) -> bool:
        return all(math.isfinite(probe.value) for probe in self.included)

    @property
    def sup_estimate(self) -> "Optional[float]":
        values = [probe.value for probe in self.included]
        return max(values) if values else None

    def trend_data(self) -> "tuple[list[float], list[float]]":
        """Parameters and values of the included probes that carry a parameter."""
        members = [p for p in self.included if p.parameter is not None]
        return [p.parameter for p in members], [p.value for p in members]  # type: ignore[misc]


class CommandReport(Report):
    """The ``report_v1`` envelope written by every command."""

    template_name = "carleson/reports/command.txt"

    def __init__(
        self,
        command: str,
        inputs: "dict[str, Any]",
        result: "Optional[Any]" = None,
        verdict: "Optional[str]" = None,
        provenance: "Optional[dict[str, Any]]" = None,
        notes: "Sequence[str]" = (),
        error: "Optional[dict[str, Any]]" = None,
        exit_status: int = 0,
    ) -> None:
        self.command = command
        self.inputs = inputs
        self.result = result
        self.verdict = verdict
        self.provenance = provenance or {}
        self.notes = list(notes)
        self.error = error
        self.exit_status = exit_status

    @property
    def status(self) -> str:
        return "error" if self.error is not None else "completed"

    def as_dict(self) -> "dict[str, Any]":
        return {
            "schema": SCHEMA,
            "command": self.command,
            "status": self.status,
            "exit_status": self.exit_status,
            "inputs": to_json_value(self.inputs),
            "result": None if self.result is None else to_json_value(self.result),
            "verdict": self.verdict,
            "provenance": to_json_value(self.provenance),
            "notes": list(self.notes),
            "error": None if self.error is None else to_json_value(self.error),
        }

    def render_json(self) -> str:
        return (
            json.dumps(
                self.as_dict(),
                cls=DjangoJSONEncoder,
                sort_keys=True,
                indent=2,
                allow_nan=False,
            )
            + "\n"
        )

    def get_context_data(
        self, parent_context: "Optional[RenderContext]" = None
    ) -> "Optional[RenderContext]":
        if isinstance(self.result, Report):
            body = self.result.render_text(parent_context)
        elif self.result is not None:
            body = Summary(to_json_value(self.result)).render_text(parent_context)
        else:
            body = ""
        return {
            "command": self.command,
            "status": self.status,
            "verdict": self.verdict,
            "body": body,
            "notes": self.notes,
            "error": self.error,
        }


class Summary(Report):
    """Key/value summary of the scalar entries of a result without its own template."""

    def __init__(self, data: "dict[str, Any]") -> None:
        self.data = data

    def as_dict(self) -> "dict[str, Any]":
        return self.data


def validate_report(document: "str | dict[str, Any]") -> "dict[str, Any]":
    """Parse (if needed) and check a document against the ``report_v1`` layout."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"report is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise InvalidInput("report must be a JSON object")
    for key, types in REQUIRED_KEYS.items():
        if key not in document:
            raise InvalidInput(f"report is missing {key!r}")
        value = document[key]
        if isinstance(value, bool) or not isinstance(value, types):
            raise InvalidInput(f"report field {key!r} has the wrong type")
    if document["schema"] != SCHEMA:
        raise InvalidInput(f"unsupported report schema {document['schema']!r}")
    if document["status"] not in STATUSES:
        raise InvalidInput(f"unknown report status {document['status']!r}")
    if (document["status"] == "error") != (document["error"] is not None):
        raise InvalidInput("error block must be present exactly for failed commands")
    if not all(isinstance(note, str) for note in document["notes"]):
        raise InvalidInput("report notes must be strings")
    return document
