from django.apps import AppConfig


class CarlesonAppConfig(AppConfig):
    label = "carleson"
    name = "carleson"
    verbose_name = "Carleson"
