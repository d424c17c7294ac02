"""
Django settings for the carleson test project.

Nothing here touches a database; the tests are ``SimpleTestCase`` classes and
only need the app registry, the template engine and logging.
"""

import os

import django


PROJECT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
BASE_DIR = os.path.dirname(PROJECT_DIR)

# SECURITY WARNING: test-only key.
SECRET_KEY = "carleson-test-settings-not-secret"

DEBUG = True


# Application definition

INSTALLED_APPS = [
    "carleson",
    "carleson.test",
    "carleson.test.example",
]

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
            ]
        },
    }
]

DATABASES: "dict[str, dict[str, str]]" = {}


# Logging
# Library modules log under "carleson"; tests only want to see warnings.

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {
        "console": {"class": "logging.StreamHandler"},
    },
    "loggers": {
        "carleson": {"handlers": ["console"], "level": "WARNING", "propagate": False},
    },
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

if django.VERSION < (4, 0):
    # Deprecated since 4.0. See also: https://docs.djangoproject.com/en/4.2/ref/settings/#use-l10n
    USE_L10N = True

USE_TZ = True


# Toolkit settings

CARLESON_THREADS = 1
