"""
indeftheta Settings - Production Environment (batch runs)
"""

from .base import *  # noqa: F401,F403


DEBUG = False

SECRET_KEY = env('SECRET_KEY', default=SECRET_KEY)  # noqa: F405

LOGGING['loggers']['apps']['level'] = env('INDEFTHETA_LOG_LEVEL', default='WARNING')  # noqa: F405

INDEFTHETA.update({  # noqa: F405
    'THREADS': env.int('INDEFTHETA_THREADS', default=os.cpu_count() or 1),  # noqa: F405
})
