"""
Console entry point.

``carleson <command> --config run.json`` runs the management command of the
same name. Outside a Django project a minimal settings object is configured
so the report templates and logging work.
"""

import os
import sys

from typing import TYPE_CHECKING

import django

from django.conf import settings
from django.core.management import execute_from_command_line


if TYPE_CHECKING:
    from typing import Optional


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "carleson": {"handlers": ["console"], "level": "INFO", "propagate": False},
    },
}


def configure() -> None:
    if settings.configured or os.environ.get("DJANGO_SETTINGS_MODULE"):
        return
    settings.configure(
        INSTALLED_APPS=["carleson"],
        TEMPLATES=[
            {
                "BACKEND": "django.template.backends.django.DjangoTemplates",
                "APP_DIRS": True,
            }
        ],
        LOGGING=LOGGING,
        USE_TZ=True,
    )


def main(argv: "Optional[list[str]]" = None) -> None:
    argv = sys.argv[1:] if argv is None else argv
    configure()
    django.setup()
    execute_from_command_line(["carleson", "carleson", *argv])


if __name__ == "__main__":
    main()
