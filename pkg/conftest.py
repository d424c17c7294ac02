import os

import django


os.environ.setdefault("DJANGO_SETTINGS_MODULE", "carleson.test.settings")
django.setup()
