"""
Django settings for the Gamma-Poisson global games toolkit.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# No web surface is served; the key only satisfies Django's settings contract.
SECRET_KEY = os.environ.get('SESSION_SECRET', 'django-insecure-default-dev-key-change-in-production')

DEBUG = False

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    # Third-party apps
    'rest_framework',
    # Project apps
    'common',
    'gamma_poisson',
    'estimators',
    'equilibrium',
    'meanfield',
    'simulation',
    'cli',
]

# Nothing is persisted; the test runner only needs a backend to exist.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# REST Framework settings (serializers and renderers only)
REST_FRAMEWORK = {
    'COERCE_DECIMAL_TO_STRING': False,
    'UNICODE_JSON': False,
    'COMPACT_JSON': False,
    'STRICT_JSON': True,
}

# Numerical settings, read through common.settings.game_settings
GLOBAL_GAMES = {
    'DEFAULT_SEED': int(os.environ.get('GG_SEED', '20240917')),
    'DEFAULT_SAMPLES': int(os.environ.get('GG_SAMPLES', str(10 ** 6))),
    'MIN_SAMPLES': 1000,
    'CHUNK_SIZE': 2 ** 16,
    'WORKERS': int(os.environ.get('GG_WORKERS', '1')),
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

# Logging goes to stderr only so that reports written to stdout stay byte-identical.
LOG_LEVEL = os.environ.get('GG_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False}
        for app in ('common', 'gamma_poisson', 'estimators', 'equilibrium', 'meanfield', 'simulation', 'cli')
    },
}
