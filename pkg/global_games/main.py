#!/usr/bin/env python
"""
Main entry point for the global games toolkit.

    python main.py threshold --k 1 --theta 1 --lambda 5 --p 1 --g 3
"""
import os
import sys

# Set the Django settings module
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings')

# Make the apps importable when run from another directory
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

COMMANDS = ('threshold', 'table', 'potential', 'dynamics', 'signals', 'critical_gain', 'verify')


def usage():
    return "usage: main.py {%s} [options]" % ','.join(COMMANDS)


def main(argv=None):
    """Dispatch to the toolkit's management commands."""
    argv = list(sys.argv if argv is None else argv)
    if len(argv) < 2 or argv[1] not in COMMANDS + ('help', 'test'):
        sys.stderr.write(usage() + '\n')
        return 1

    from django.core.management import execute_from_command_line
    execute_from_command_line(argv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
