from django.apps import AppConfig


class ThetaConfig(AppConfig):
    name = "apps.theta"
    verbose_name = "Indefinite theta series"
