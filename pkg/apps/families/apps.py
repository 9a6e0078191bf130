"""
apps/families/apps.py

Worked families of indefinite theta series: Eisenstein series, the
quadratic-polynomial forms on Gamma0(4) and the Hurwitz class number
generating function.
"""

from django.apps import AppConfig


class FamiliesConfig(AppConfig):
    name = "apps.families"
    verbose_name = "Example families"
