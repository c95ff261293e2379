"""Pytest bootstrap: mirror manage.py so the Django apps' tests.py modules run under pytest."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings')
django.setup()
