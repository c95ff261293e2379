"""
Models for the equilibrium app.
"""
from dataclasses import dataclass, field

from common.exceptions import IndexOutOfRange, ParameterError
from common.settings import game_settings
from estimators.models import ThresholdPolicy, ThresholdProfile


@dataclass(frozen=True)
class ActionProfile:
    """
    Binary actions of the deterministic game, one per agent.
    """
    actions: tuple

    def __post_init__(self):
        actions = tuple(int(a) for a in self.actions)
        if not actions:
            raise ParameterError("An action profile needs at least one agent.")
        if any(a not in (0, 1) for a in actions):
            raise ParameterError(f"Actions must be binary, got {actions}.")
        object.__setattr__(self, 'actions', actions)

    def __len__(self):
        return len(self.actions)

    def __getitem__(self, i):
        return self.actions[i]

    def __str__(self):
        return ''.join(str(a) for a in self.actions)

    @classmethod
    def all_zeros(cls, n_agents):
        return cls((0,) * n_agents)

    @classmethod
    def all_ones(cls, n_agents):
        return cls((1,) * n_agents)

    @property
    def n_active(self):
        return sum(self.actions)

    def check_index(self, i):
        if not 0 <= i < len(self.actions):
            raise IndexOutOfRange(f"Agent index {i} outside 0..{len(self.actions) - 1}.")

    def with_action(self, i, action):
        self.check_index(i)
        return ActionProfile(self.actions[:i] + (action,) + self.actions[i + 1:])


@dataclass(frozen=True)
class CrossingPoint:
    y: int
    benefit: float
    cost: float

    @property
    def activates(self):
        return self.benefit > self.cost


@dataclass(frozen=True)
class BestResponseResult:
    """
    Best-response threshold of one agent with the scan that produced it.

    ``pole_end`` is the first signal with a finite cost estimate; signals
    below it (p < 0 only) never activate.
    """
    agent: int
    policy: ThresholdPolicy
    diagnostics: tuple = ()
    pole_end: int = 0

    @property
    def tau_star(self):
        return self.policy.to_value()


@dataclass(frozen=True)
class SufficientCondition:
    """
    Outcome of a sufficient-condition check: ``holds`` compares g with the
    critical gain (g above it for p > 0, g below it for p < 0).
    """
    holds: bool
    critical_gain: float
    direction: str


@dataclass(frozen=True)
class DynamicsRound:
    index: int
    profile: ThresholdProfile
    changed: tuple


@dataclass(frozen=True)
class DynamicsResult:
    """
    Outcome of round-robin best-response dynamics.
    """
    profile: ThresholdProfile
    converged: bool
    rounds: int
    trace: tuple = ()
    condition_holds: bool = True

    @property
    def monotone_agents(self):
        """Agents whose threshold never increased along the recorded trajectory."""
        profiles = [r.profile for r in self.trace]
        agents = range(len(self.profile))
        return tuple(
            i for i in agents
            if all(later[i].order_key <= earlier[i].order_key for earlier, later in zip(profiles, profiles[1:]))
        )

    @property
    def is_monotone(self):
        return len(self.monotone_agents) == len(self.profile)


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Tolerances of the adaptive quadrature behind expected utilities and
    potentials, plus the Monte Carlo fallback used when it fails.
    """
    rtol: float
    atol: float
    tail_mass: float
    limit: int
    mc_fallback: bool = True
    fallback_samples: int = 10 ** 6
    seed: int = 0

    @classmethod
    def from_settings(cls, **overrides):
        values = {
            'rtol': game_settings.QUAD_RTOL,
            'atol': game_settings.QUAD_ATOL,
            'tail_mass': game_settings.QUAD_TAIL_MASS,
            'limit': game_settings.QUAD_LIMIT,
            'mc_fallback': game_settings.QUAD_MC_FALLBACK,
            'fallback_samples': game_settings.DEFAULT_SAMPLES,
            'seed': game_settings.DEFAULT_SEED,
        }
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class DeviationGain:
    agent: int
    deviation: object
    gain: float


@dataclass(frozen=True)
class QuadratureAudit:
    """
    Exhaustive single-agent deviation check evaluated by quadrature.
    """
    passed: bool
    tolerance: float
    worst: DeviationGain
    n_checked: int
    gains: tuple = field(default=(), repr=False)

    @property
    def max_gain(self):
        return self.worst.gain
