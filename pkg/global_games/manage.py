#!/usr/bin/env python
"""
Command-line utility of the global games toolkit.

    python manage.py table --n-samples 100000
    python manage.py test --exclude-tag slow
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the toolkit's dependencies (django, "
            "djangorestframework, numpy, scipy, pyyaml) first."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
