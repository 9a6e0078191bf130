"""
indeftheta Settings - Development Environment
"""

from .base import *  # noqa: F401,F403


DEBUG = True

# Enhanced logging for development
LOGGING['loggers']['apps']['level'] = 'DEBUG'  # noqa: F405
