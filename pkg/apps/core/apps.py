"""
apps/core/apps.py

Shared plumbing: exceptions, INDEFTHETA settings access, reports, argument
parsing and the `theta` management command.
"""

from django.apps import AppConfig


class CoreConfig(AppConfig):
    name = 'apps.core'
    verbose_name = 'Core'
