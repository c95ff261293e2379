"""
Utility functions for reports, error handling and integer scans.
"""
from importlib import metadata

import numpy as np

from common.exceptions import GlobalGameError
from common.settings import game_settings

PACKAGE_NAME = 'gamma-poisson-global-games'


def tool_version():
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return '0.1.0'


def exit_code_for(exc):
    """
    Map an exception to the process exit code reported by the command line.
    """
    if isinstance(exc, GlobalGameError):
        return exc.exit_code

    # Bad numeric input coming from argument parsing or parameter files
    if isinstance(exc, (ValueError, TypeError)):
        return 1

    return 2


def generate_report_data(command, params, results, seed=None, n_samples=None, additional_data=None):
    """
    Generate report data with the metadata every output artifact embeds.

    Args:
        command: Name of the command producing the report
        params: Serialized parameter set
        results: Command-specific payload
        seed: Seed of the random streams, if any were used
        n_samples: Monte Carlo sample count, if any
        additional_data: Dict of additional metadata

    Returns:
        Dict containing report data
    """
    metadata_block = {
        'command': command,
        'version': tool_version(),
        'params': params,
        'seed': seed,
        'n_samples': n_samples,
    }
    metadata_block.update(additional_data or {})
    return {
        'metadata': metadata_block,
        'results': results,
    }


def scan_first(predicate, start=0, limit=None, block=64):
    """
    Smallest integer y >= start with ``predicate(y)`` true, for a predicate
    that is false up to some point and true from there on.

    ``predicate`` receives an integer array and returns a boolean array.
    Blocks double in size until a hit, so long scans stay cheap. Returns
    None when nothing is found below ``start + limit``.
    """
    limit = game_settings.MAX_SCAN if limit is None else limit
    end = start + limit
    lo = start
    while lo < end:
        ys = np.arange(lo, min(lo + block, end))
        hits = np.flatnonzero(predicate(ys))
        if hits.size:
            return int(ys[hits[0]])
        lo = int(ys[-1]) + 1
        block *= 2
    return None
