"""
Reference parameter sets with published mean-field, omniscient and
certainty-equivalence thresholds (p = 1, N -> infinity).
"""
import logging

from gamma_poisson.models import ModelParams
from .baselines import tau_certainty_equivalence, tau_omniscient
from .models import TableComparison, TableRow
from .potential import mfpf_argmax

logger = logging.getLogger(__name__)

REFERENCE_ROWS = (
    TableRow(k=1, theta=1.0, lam=5.0, g=1.0, tau_max=50, tau_star=1, tau_omni=1.0, tau_ce=5),
    TableRow(k=1, theta=1.0, lam=5.0, g=2.0, tau_max=50, tau_star=5, tau_omni=2.0, tau_ce=11),
    TableRow(k=1, theta=1.0, lam=5.0, g=3.0, tau_max=50, tau_star=10, tau_omni=3.0, tau_ce=17),
    TableRow(k=2, theta=0.5, lam=2.0, g=5.0, tau_max=75, tau_star=3, tau_omni=5.0, tau_ce=10),
    TableRow(k=2, theta=0.5, lam=2.0, g=7.5, tau_max=75, tau_star=8, tau_omni=7.5, tau_ce=16),
    TableRow(k=2, theta=0.5, lam=2.0, g=10.0, tau_max=75, tau_star=13, tau_omni=10.0, tau_ce=23),
    TableRow(k=3, theta=0.1, lam=1.0, g=20.0, tau_max=150, tau_star=0, tau_omni=20.0, tau_ce=19),
    TableRow(k=3, theta=0.1, lam=1.0, g=40.0, tau_max=150, tau_star=16, tau_omni=40.0, tau_ce=41),
    TableRow(k=3, theta=0.1, lam=1.0, g=60.0, tau_max=150, tau_star=32, tau_omni=60.0, tau_ce=63),
)


def row_params(row, p=1):
    return ModelParams(row.k, row.theta, row.lam, p, row.g)


def compare_row(row, n_samples=None, seed=None, workers=None, tau_max=None, tolerance=1):
    """Recompute the three thresholds of one reference row."""
    params = row_params(row)
    tau_star, _ = mfpf_argmax(params, tau_max or row.tau_max, n_samples, seed, workers)
    comparison = TableComparison(
        row=row,
        tau_star=tau_star,
        tau_omni=tau_omniscient(params),
        tau_ce=tau_certainty_equivalence(params),
        tolerance=tolerance,
    )
    if not comparison.passed:
        logger.warning("Reference row %s reproduced as tau*=%d, tau_ce=%d", row, tau_star, comparison.tau_ce)
    return comparison


def reproduce_table(rows=REFERENCE_ROWS, n_samples=None, seed=None, workers=None, tolerance=1):
    return [compare_row(row, n_samples, seed, workers, tolerance=tolerance) for row in rows]
