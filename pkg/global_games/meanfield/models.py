"""
Models for the meanfield app.
"""
import math
from dataclasses import dataclass

import numpy as np

from common.exceptions import ParameterError


@dataclass(frozen=True)
class MfpfCurve:
    """
    Monte Carlo estimates of the mean-field potential on a threshold grid,
    all computed from the same state draws.
    """
    taus: tuple
    values: tuple
    params: object
    n_samples: int
    seed: int

    def __post_init__(self):
        taus = tuple(int(tau) for tau in self.taus)
        if any(later <= earlier for earlier, later in zip(taus, taus[1:])):
            raise ParameterError("Curve thresholds must be strictly increasing.")
        if len(taus) != len(self.values):
            raise ParameterError("A curve needs one estimate per threshold.")
        if not all(math.isfinite(value.mean) for value in self.values):
            raise ParameterError("Curve values must be finite.")
        object.__setattr__(self, 'taus', taus)
        object.__setattr__(self, 'values', tuple(self.values))

    def __len__(self):
        return len(self.taus)

    @property
    def means(self):
        return np.array([value.mean for value in self.values])

    @property
    def stderrs(self):
        return np.array([value.stderr for value in self.values])

    @property
    def argmax_index(self):
        # np.argmax returns the first maximizer, i.e. the smallest threshold
        return int(np.argmax(self.means))

    @property
    def tau_star(self):
        return self.taus[self.argmax_index]


@dataclass(frozen=True)
class MfpfEndpoints:
    """Closed-form potential at tau = 0 and in the limit tau -> infinity."""
    at_zero: float
    at_infinity: float


@dataclass(frozen=True)
class TableRow:
    """
    One reference parameter set with its published thresholds.
    """
    k: int
    theta: float
    lam: float
    g: float
    tau_max: int
    tau_star: int
    tau_omni: float
    tau_ce: int


@dataclass(frozen=True)
class TableComparison:
    """
    Computed thresholds for one reference row and whether they match.
    """
    row: TableRow
    tau_star: int
    tau_omni: float
    tau_ce: int
    tolerance: int = 1

    @property
    def tau_star_ok(self):
        return abs(self.tau_star - self.row.tau_star) <= self.tolerance

    @property
    def tau_omni_ok(self):
        return math.isclose(self.tau_omni, self.row.tau_omni, rel_tol=1e-12)

    @property
    def tau_ce_ok(self):
        return self.tau_ce == self.row.tau_ce

    @property
    def passed(self):
        return self.tau_star_ok and self.tau_omni_ok and self.tau_ce_ok


@dataclass(frozen=True)
class SignalRow:
    """Marginal probability of one signal value and the thresholds placed on it."""
    y: int
    pmf: float
    cdf: float
    markers: tuple = ()
