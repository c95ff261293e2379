"""
Models for the simulation app.
"""
from dataclasses import dataclass

import numpy as np

from common.exceptions import ParameterError


@dataclass(frozen=True)
class GameRealization:
    """
    One forward draw of the game: the state, every agent's signal, the
    actions the threshold policies take and the payoffs they earn.
    """
    x: float
    signals: tuple
    actions: tuple
    utilities: tuple

    def __post_init__(self):
        if not len(self.signals) == len(self.actions) == len(self.utilities):
            raise ParameterError("Signals, actions and utilities need one entry per agent.")

    @property
    def n_agents(self):
        return len(self.signals)


@dataclass(frozen=True)
class RealizationBatch:
    """
    Many realizations stored column-wise: x has shape (n,), the other
    arrays (n, n_agents).
    """
    x: np.ndarray
    signals: np.ndarray
    actions: np.ndarray
    utilities: np.ndarray

    def __len__(self):
        return len(self.x)

    def __getitem__(self, index):
        return GameRealization(
            float(self.x[index]),
            tuple(int(y) for y in self.signals[index]),
            tuple(int(a) for a in self.actions[index]),
            tuple(float(u) for u in self.utilities[index]),
        )


@dataclass(frozen=True)
class DeviationEstimate:
    """Paired Monte Carlo estimate of one agent's gain from one deviation."""
    agent: int
    deviation: object
    gain: object
    upper: float


@dataclass(frozen=True)
class DeviationAuditReport:
    """
    Outcome of a Monte Carlo deviation audit. The profile passes when every
    one-sided upper confidence bound stays below ``epsilon``.
    """
    passed: bool
    epsilon: float
    confidence: float
    worst: DeviationEstimate
    estimates: tuple
    n_realizations: int
    seed: int

    @property
    def max_gain(self):
        return self.worst.gain.mean

    @property
    def max_upper(self):
        return max(estimate.upper for estimate in self.estimates)
