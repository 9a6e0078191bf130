from django.apps import AppConfig


class LatticeConfig(AppConfig):
    name = "apps.lattice"
    verbose_name = "Lattice"
