"""
Access to the INDEFTHETA settings dict.

Tools are usable as a plain library, so every lookup falls back to the
defaults below when Django settings are not configured.
"""

from typing import Any

DEFAULTS = {
    'THREADS': 1,
    'DEFAULT_TOLERANCE': 1e-10,
    'MAX_ORDER': 400,
    'MAX_POINTS': 2_000_000,
    'SPECIAL_ABS_TOL': 1e-14,
}


def setting(name: str) -> Any:
    """Return INDEFTHETA[name] from Django settings, or the module default."""
    try:
        from django.conf import settings
        if settings.configured:
            return getattr(settings, 'INDEFTHETA', {}).get(name, DEFAULTS[name])
    except ImportError:
        pass
    return DEFAULTS[name]
