from django.apps import AppConfig


class SpecialConfig(AppConfig):
    name = "apps.special"
    verbose_name = "Special functions"
