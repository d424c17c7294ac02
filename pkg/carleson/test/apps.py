from django.apps import AppConfig


class CarlesonTestAppConfig(AppConfig):
    label = "carleson_test"
    name = "carleson.test"
    verbose_name = "Carleson test app"
