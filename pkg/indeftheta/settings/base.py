"""
Django settings for the indeftheta project.

The project has no web surface and no database; Django provides the
settings layer, app registry, logging configuration and management
commands.
"""

import os
from pathlib import Path

import environ

# Build paths inside the project
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Initialize environ
env = environ.Env()

# Read .env file if present
env.read_env(os.path.join(BASE_DIR, '.env'))

SECRET_KEY = env('SECRET_KEY', default='indeftheta-local-key-not-used-for-crypto')

DEBUG = env.bool('DEBUG', default=False)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',

    'apps.core',
    'apps.lattice',
    'apps.special',
    'apps.series',
    'apps.theta',
    'apps.families',
]

# No models are stored anywhere
DATABASES = {}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'INFO',
        },
        'apps': {
            'handlers': ['console'],
            'level': 'INFO',
        },
    },
}

# Computation settings
INDEFTHETA = {
    'THREADS': env.int('INDEFTHETA_THREADS', default=1),
    'DEFAULT_TOLERANCE': env.float('INDEFTHETA_TOLERANCE', default=1e-10),
    'MAX_ORDER': env.int('INDEFTHETA_MAX_ORDER', default=400),
    'MAX_POINTS': env.int('INDEFTHETA_MAX_POINTS', default=2_000_000),
    'SPECIAL_ABS_TOL': 1e-14,
}
