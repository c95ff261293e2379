"""
Models for the gamma_poisson app: game parameters and distribution summaries.
"""
import math
from dataclasses import dataclass

from common.exceptions import (
    InvalidGain, InvalidShape, NonPositiveRate, ParameterError, TooFewAgents, ZeroExponent,
)

INFINITE_AGENTS = math.inf


@dataclass(frozen=True)
class ModelParams:
    """
    Hyperparameters of one Gamma-Poisson global game.

    The state X follows a Gamma(k, theta) prior (shape, rate), every agent
    observes Y_i ~ Poisson(lam * X), activation costs X**p and the normalized
    linear benefit has gain g. ``n_agents`` is an integer or ``INFINITE_AGENTS``.
    """
    k: int
    theta: float
    lam: float
    p: int
    g: float
    n_agents: float = INFINITE_AGENTS

    def __post_init__(self):
        if self.theta <= 0 or self.lam <= 0:
            raise NonPositiveRate(f"theta={self.theta} and lambda={self.lam} must both be positive.")
        if self.k < 1 or float(self.k) != int(self.k):
            raise InvalidShape(f"k={self.k} must be an integer >= 1.")
        if self.p == 0:
            raise ZeroExponent()
        if float(self.p) != int(self.p):
            raise ParameterError(f"p={self.p} must be an integer.")
        if self.g <= 0:
            raise InvalidGain(f"g={self.g} must be positive.")
        if not self.is_infinite and self.n_agents < 2:
            raise TooFewAgents(f"n_agents={self.n_agents} must be at least 2.")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "p", int(self.p))
        for name in ("theta", "lam", "g"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.is_infinite:
            object.__setattr__(self, "n_agents", int(self.n_agents))

    def __str__(self):
        return (
            f"k={self.k}, theta={self.theta}, lambda={self.lam}, "
            f"p={self.p}, g={self.g}, N={'inf' if self.is_infinite else self.n_agents}"
        )

    @property
    def is_infinite(self):
        return math.isinf(self.n_agents)

    @property
    def posterior_rate(self):
        return self.lam + self.theta

    @property
    def cross_success(self):
        """Probability (theta+lam)/(theta+2*lam) closing the cross-belief NB."""
        return (self.theta + self.lam) / (self.theta + 2 * self.lam)

    def with_agents(self, n_agents):
        return ModelParams(self.k, self.theta, self.lam, self.p, self.g, n_agents)

    def with_gain(self, g):
        return ModelParams(self.k, self.theta, self.lam, self.p, g, self.n_agents)


@dataclass(frozen=True)
class PosteriorState:
    """
    Gamma posterior of the state after one observation.
    """
    shape: float
    rate: float

    @property
    def mean(self):
        return self.shape / self.rate

    @property
    def variance(self):
        return self.shape / self.rate ** 2


@dataclass(frozen=True)
class McEstimate:
    """
    Monte Carlo estimate with its standard error and provenance.
    """
    mean: float
    stderr: float
    n_samples: int
    seed: int

    def within(self, value, n_sigmas=3.0):
        """True when ``value`` lies inside the n-sigma band around the estimate."""
        return abs(self.mean - value) <= n_sigmas * self.stderr + 1e-15

    def upper_bound(self, z):
        return self.mean + z * self.stderr
