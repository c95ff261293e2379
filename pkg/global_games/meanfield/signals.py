"""
Marginal signal distribution with the thresholds marked on it.
"""
import math

from gamma_poisson.distributions import marginal_signal_cdf, marginal_signal_pmf, signal_support_bound
from .models import SignalRow


def _marks(value):
    """Signal index a threshold falls on; None for sentinels."""
    if isinstance(value, str) or value is None or not math.isfinite(value):
        return None
    return math.floor(value)


def signal_distribution(params, y_max=None, thresholds=None):
    """
    Rows (y, P(Y = y), P(Y <= y)) for y = 0..y_max. ``thresholds`` maps a
    label such as "tau_star" to a value; every row lists the labels whose
    value floors to its y.
    """
    y_max = signal_support_bound(params) if y_max is None else y_max
    thresholds = thresholds or {}
    positions = {label: _marks(value) for label, value in thresholds.items()}
    rows = []
    for y in range(y_max + 1):
        labels = tuple(sorted(label for label, position in positions.items() if position == y))
        rows.append(SignalRow(y, marginal_signal_pmf(y, params), marginal_signal_cdf(y, params), labels))
    return rows
