"""
Best-response thresholds and round-robin best-response dynamics.

An agent activates iff b_hat(y) > c_hat(y). With a low profile (p > 0) the
benefit estimate decreases and the cost estimate increases in y, so the
activation set is {y <= tau*}; with a high profile (p < 0) both move the
other way and the activation set is {y > tau*}.
"""
import logging

import numpy as np

from common.exceptions import DegenerateBound, IndexOutOfRange, KindMismatch, ParameterError
from estimators.estimates import benefit_estimate, cost_estimate, first_regular_signal
from estimators.models import Bound, PolicyKind, ThresholdPolicy, policy_kind_for
from .conditions import high_activation_bound, sufficient_condition, threshold_upper_bound
from .models import BestResponseResult, CrossingPoint, DynamicsResult, DynamicsRound

logger = logging.getLogger(__name__)


def _check_kind(profile, params):
    expected = policy_kind_for(params)
    if profile.kind != expected:
        raise KindMismatch(f"p={params.p} calls for {expected} thresholds, got a {profile.kind} profile.")


def _diagnostics(ys, benefits, costs, upto):
    return tuple(
        CrossingPoint(int(y), float(b), float(c))
        for y, b, c in zip(ys[:upto], benefits[:upto], costs[:upto])
    )


def _crossings(activates):
    return int(np.count_nonzero(activates[1:] != activates[:-1]))


def _best_response_low(i, profile_others, params):
    t_bar = threshold_upper_bound(params)
    if t_bar == Bound.NEVER:
        # c_hat(0) >= g >= b_hat(0)
        benefit = benefit_estimate(0, profile_others, params)
        cost = cost_estimate(0, params)
        return BestResponseResult(i, ThresholdPolicy(PolicyKind.LOW, Bound.NEVER), (CrossingPoint(0, benefit, cost),))
    ys = np.arange(t_bar + 2)
    benefits = np.asarray(benefit_estimate(ys, profile_others, params))
    costs = np.asarray(cost_estimate(ys, params))
    activates = benefits > costs
    if _crossings(activates) > 1:
        logger.warning("Agent %d: b_hat - c_hat changes sign %d times below T_bar=%d for %s",
                       i, _crossings(activates), t_bar, params)
    if not activates.any():
        tau = Bound.NEVER
        upto = 1
    else:
        tau = int(np.flatnonzero(activates)[-1])
        upto = tau + 2
    return BestResponseResult(i, ThresholdPolicy(PolicyKind.LOW, tau), _diagnostics(ys, benefits, costs, upto))


def _best_response_high(i, profile_others, params):
    pole_end = first_regular_signal(params)
    y_hi = high_activation_bound(params)
    ys = np.arange(y_hi + 1)
    benefits = np.asarray(benefit_estimate(ys, profile_others, params))
    costs = np.full(ys.shape, np.inf)
    costs[pole_end:] = cost_estimate(ys[pole_end:], params)
    activates = benefits > costs
    if _crossings(activates) > 1:
        logger.warning("Agent %d: b_hat - c_hat changes sign %d times below %d for %s",
                       i, _crossings(activates), y_hi, params)
    idle = np.flatnonzero(~activates)
    if not idle.size:
        tau = Bound.ALWAYS
        upto = 1
    else:
        tau = int(idle[-1])
        upto = tau + 2
    return BestResponseResult(
        i, ThresholdPolicy(PolicyKind.HIGH, tau), _diagnostics(ys, benefits, costs, upto), pole_end=pole_end,
    )


def best_response_threshold(i, profile_others, params):
    """
    Best-response threshold of agent i against the thresholds of the others.

    Low kind: tau* = max{y : b_hat(y) > c_hat(y)}, or Never when no signal
    activates. The scan stops at T_bar + 1. High kind: tau* = max{y :
    b_hat(y) <= c_hat(y)}, or Always when every signal activates.
    """
    if params.is_infinite:
        raise ParameterError("Best responses need a finite number of agents.")
    if not 0 <= i < params.n_agents:
        raise IndexOutOfRange(f"Agent index {i} outside 0..{params.n_agents - 1}.")
    _check_kind(profile_others, params)
    if profile_others.kind == PolicyKind.LOW:
        return _best_response_low(i, profile_others, params)
    return _best_response_high(i, profile_others, params)


def best_response_dynamics(initial, params, max_rounds=20, on_round=None):
    """
    Round-robin best-response dynamics: agent 0, 1, ... N-1 update in turn,
    each seeing the updates made earlier in the round. Stops after a round in
    which no threshold changed, or after ``max_rounds`` rounds.

    ``on_round`` is called with every DynamicsRound as it completes.
    """
    if params.is_infinite:
        raise ParameterError("Best-response dynamics need a finite number of agents.")
    if len(initial) != params.n_agents:
        raise ParameterError(f"The initial profile has {len(initial)} entries for {params.n_agents} agents.")
    if max_rounds < 1:
        raise ParameterError("max_rounds must be positive.")
    _check_kind(initial, params)

    try:
        condition = sufficient_condition(params)
        condition_holds = condition.holds
        if not condition_holds:
            logger.warning("Sufficient condition fails for %s (critical gain %.6g); "
                           "threshold best responses may not exist", params, condition.critical_gain)
    except DegenerateBound as exc:
        condition_holds = False
        logger.warning("Sufficient condition unavailable for %s: %s", params, exc.detail)

    profile = initial
    trace = [DynamicsRound(0, profile, ())]
    converged = False
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        changed = []
        for i in range(params.n_agents):
            result = best_response_threshold(i, profile.without(i), params)
            if result.policy != profile[i]:
                profile = profile.replace(i, result.policy)
                changed.append(i)
        record = DynamicsRound(rounds, profile, tuple(changed))
        trace.append(record)
        logger.info("Round %d: %s (changed agents %s)", rounds, profile, changed)
        if on_round is not None:
            on_round(record)
        if not changed:
            converged = True
            break

    if not converged:
        logger.warning("Best-response dynamics stopped after %d rounds without converging", rounds)
    return DynamicsResult(profile, converged, rounds, tuple(trace), condition_holds)
