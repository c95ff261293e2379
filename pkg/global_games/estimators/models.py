"""
Models for the estimators app: threshold policies and threshold profiles.
"""
import math
import numbers
from dataclasses import dataclass

import numpy as np
from django.db import models

from common.exceptions import IndexOutOfRange, MixedKindProfile, ParameterError
from gamma_poisson.distributions import poisson_cdf


class PolicyKind(models.TextChoices):
    """Threshold policy kind"""
    LOW = "low"
    HIGH = "high"


class Bound(models.TextChoices):
    """Threshold values that are not finite integers"""
    UNBOUNDED = "inf"
    NEVER = "never"
    ALWAYS = "always"


# Sentinels each kind may carry besides a finite threshold.
# A low policy with an unbounded threshold always activates, a high one never does.
ALLOWED_BOUNDS = {
    PolicyKind.LOW: (Bound.UNBOUNDED, Bound.NEVER),
    PolicyKind.HIGH: (Bound.UNBOUNDED, Bound.ALWAYS),
}


def policy_kind_for(params):
    """Low thresholds pair with increasing costs (p > 0), high ones with p < 0."""
    return PolicyKind.LOW if params.p > 0 else PolicyKind.HIGH


@dataclass(frozen=True)
class ThresholdPolicy:
    """
    Activate iff y <= tau (low) or y > tau (high).
    """
    kind: PolicyKind
    tau: object

    def __post_init__(self):
        kind = PolicyKind(self.kind)
        tau = self.tau
        if isinstance(tau, str):
            tau = Bound(tau)
            if tau not in ALLOWED_BOUNDS[kind]:
                raise ParameterError(f"A {kind} policy cannot use the threshold '{tau}'.")
        else:
            finite = isinstance(tau, numbers.Real) and not isinstance(tau, bool) and math.isfinite(tau)
            if not finite or int(tau) != tau or tau < 0:
                raise ParameterError(f"Threshold must be a nonnegative integer, got {tau!r}.")
            tau = int(tau)
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'tau', tau)

    def __str__(self):
        return f"{self.kind}:{self.to_value()}"

    @classmethod
    def from_value(cls, kind, value):
        """
        Build a policy from its boundary representation: an integer, "inf",
        "never", "always", or -1 for the empty (low) / full (high) activation set.
        """
        kind = PolicyKind(kind)
        if isinstance(value, str) and value.lstrip('-').isdigit():
            value = int(value)
        if value == -1:
            value = Bound.NEVER if kind == PolicyKind.LOW else Bound.ALWAYS
        return cls(kind, value)

    def to_value(self):
        return self.tau if self.is_finite else str(self.tau.value)

    @property
    def is_finite(self):
        return not isinstance(self.tau, Bound)

    @property
    def never_activates(self):
        return self.tau == Bound.NEVER or (self.kind == PolicyKind.HIGH and self.tau == Bound.UNBOUNDED)

    @property
    def always_activates(self):
        return self.tau == Bound.ALWAYS or (self.kind == PolicyKind.LOW and self.tau == Bound.UNBOUNDED)

    @property
    def order_key(self):
        """Position on the extended integer line: NEVER/ALWAYS = -1, UNBOUNDED = inf."""
        if self.is_finite:
            return self.tau
        return float('inf') if self.tau == Bound.UNBOUNDED else -1

    def activates(self, signals):
        signals = np.asarray(signals)
        if self.never_activates:
            return np.zeros(signals.shape, dtype=bool)
        if self.always_activates:
            return np.ones(signals.shape, dtype=bool)
        if self.kind == PolicyKind.LOW:
            return signals <= self.tau
        return signals > self.tau

    def activation_given_rate(self, rate):
        """
        P(policy activates | X) for a Poisson signal of the given rate lam * X.
        """
        rate = np.asarray(rate, dtype=float)
        if self.never_activates:
            return np.zeros(rate.shape)
        if self.always_activates:
            return np.ones(rate.shape)
        below = np.asarray(poisson_cdf(self.tau, rate))
        return below if self.kind == PolicyKind.LOW else 1.0 - below


@dataclass(frozen=True)
class ThresholdProfile:
    """
    One threshold policy per agent, all of the same kind.
    """
    policies: tuple

    def __post_init__(self):
        policies = tuple(self.policies)
        if not policies:
            raise ParameterError("A threshold profile needs at least one policy.")
        if len({policy.kind for policy in policies}) > 1:
            raise MixedKindProfile()
        object.__setattr__(self, 'policies', policies)

    def __len__(self):
        return len(self.policies)

    def __iter__(self):
        return iter(self.policies)

    def __getitem__(self, index):
        return self.policies[index]

    def __str__(self):
        return f"{self.kind}{list(self.taus)}"

    @classmethod
    def from_taus(cls, kind, taus):
        return cls(tuple(ThresholdPolicy.from_value(kind, tau) for tau in taus))

    @classmethod
    def homogeneous(cls, kind, tau, n_agents):
        return cls.from_taus(kind, [tau] * n_agents)

    @property
    def kind(self):
        return self.policies[0].kind

    @property
    def taus(self):
        return tuple(policy.to_value() for policy in self.policies)

    @property
    def is_homogeneous(self):
        return len(set(self.policies)) == 1

    def _check_index(self, i):
        if not 0 <= i < len(self.policies):
            raise IndexOutOfRange(f"Agent index {i} outside 0..{len(self.policies) - 1}.")

    def without(self, i):
        self._check_index(i)
        return ThresholdProfile(self.policies[:i] + self.policies[i + 1:])

    def replace(self, i, policy):
        self._check_index(i)
        return ThresholdProfile(self.policies[:i] + (policy,) + self.policies[i + 1:])

    def insert(self, i, policy):
        """Inverse of ``without``: put agent i's policy back among the others."""
        if not 0 <= i <= len(self.policies):
            raise IndexOutOfRange(f"Agent index {i} outside 0..{len(self.policies)}.")
        return ThresholdProfile(self.policies[:i] + (policy,) + self.policies[i:])

    def actions(self, signals):
        """
        Binary actions for a (n_realizations, n_agents) array of signals.
        """
        signals = np.asarray(signals)
        columns = [policy.activates(signals[..., j]) for j, policy in enumerate(self.policies)]
        return np.stack(columns, axis=-1).astype(np.int64)

    def activation_given_rate(self, rate):
        """
        (..., n_agents) array of conditional activation probabilities given lam * X.
        """
        return np.stack([policy.activation_given_rate(rate) for policy in self.policies], axis=-1)
