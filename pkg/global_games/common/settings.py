"""
Numerical settings for the toolkit.

Values are read from the ``GLOBAL_GAMES`` dict in the Django settings, for example::

    GLOBAL_GAMES = {
        'DEFAULT_SEED': 7,
        'WORKERS': 4,
    }

Any key left out falls back to ``DEFAULTS``. Library code that runs without a
configured Django project sees the defaults only.
"""
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.core.signals import setting_changed
from rest_framework.settings import APISettings

DEFAULTS = {
    'DEFAULT_SEED': 20240917,
    'DEFAULT_SAMPLES': 10 ** 6,
    'MIN_SAMPLES': 1000,
    'CHUNK_SIZE': 2 ** 16,
    'WORKERS': 1,
    'TAIL_EPSILON': 1e-14,
    'QUAD_RTOL': 1e-8,
    'QUAD_ATOL': 1e-12,
    'QUAD_TAIL_MASS': 1e-12,
    'QUAD_LIMIT': 200,
    'QUAD_MC_FALLBACK': True,
    'AUDIT_TOLERANCE': 1e-6,
    'AUDIT_EPS_FACTOR': 1e-3,
    'AUDIT_CONFIDENCE': 0.99,
    'MAX_SCAN': 10 ** 5,
    'MAX_ENUM_AGENTS': 20,
    'MAX_SIM_AGENTS': 10 ** 4,
    'MAX_DYNAMICS_AGENTS': 32,
    'CSV_DIGITS': 12,
}


class GameSettings(APISettings):
    """
    Settings object resolving ``GLOBAL_GAMES`` keys with fallback to defaults.
    """
    @property
    def user_settings(self):
        if not hasattr(self, '_user_settings'):
            try:
                self._user_settings = getattr(settings, 'GLOBAL_GAMES', {})
            except ImproperlyConfigured:
                self._user_settings = {}
        return self._user_settings


game_settings = GameSettings(None, DEFAULTS)


def reload_game_settings(*args, **kwargs):
    if kwargs['setting'] == 'GLOBAL_GAMES':
        game_settings.reload()


setting_changed.connect(reload_game_settings)
