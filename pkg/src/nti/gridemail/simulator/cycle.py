#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Monte Carlo simulation of login cycles.

Each replication draws the number of arrivals, then every message's
reading time and benefit rate, and (with a scenario) its sender's
willingness to pay; messages are offered to the policy in arrival order.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.policies.engine import commit
from nti.gridemail.policies.engine import decide
from nti.gridemail.policies.engine import quote_price
from nti.gridemail.policies.engine import record_offer

from nti.gridemail.policies.interfaces import ADAPTIVE_PRICE

from nti.gridemail.policies.state import initial_state

from nti.gridemail.selection.reading import prior_model
from nti.gridemail.selection.reading import predict_read_time

from nti.gridemail.simulator.config import summarize

from nti.gridemail.simulator.interfaces import MIN_READ_MINUTES

from nti.gridemail.simulator.rng import poisson
from nti.gridemail.simulator.rng import normals
from nti.gridemail.simulator.rng import replication_generator

from nti.gridemail.simulator.scenarios import draw_population

logger = __import__('logging').getLogger(__name__)


def policy_for(policy, cfg):
    """
    A :class:`~.PricingPolicyConfig` from a policy kind name, with the
    time cap and opportunity rate of ``cfg``.
    """
    if isinstance(policy, PricingPolicyConfig):
        return policy
    return PricingPolicyConfig(kind=policy.replace('-', '_'),
                               time_cap_minutes=cfg.exclusive_budget_minutes,
                               opportunity_rate=cfg.opportunity_rate)


def run_replication(cfg, policy, time_model, scenario, replication):
    """
    One cycle's metrics, as a row of
    :data:`~nti.gridemail.simulator.interfaces.METRIC_NAMES`.
    """
    gen = replication_generator(cfg.seed, replication)
    arrived = poisson(gen, cfg.expected_arrivals)
    times = np.maximum(normals(gen, arrived, cfg.mean_read_minutes,
                               cfg.read_sd_minutes),
                       MIN_READ_MINUTES)
    rates = normals(gen, arrived, cfg.mean_benefit_rate, cfg.benefit_rate_sd)
    wtp = None
    if scenario is not None:
        wtp = draw_population(scenario, arrived, gen).willingness_to_pay

    predicted, _ = predict_read_time(time_model)
    predicted_benefit = cfg.mean_benefit_rate * predicted
    adaptive = policy.kind == ADAPTIVE_PRICE
    state = initial_state(policy,
                          exclusive_budget_minutes=cfg.exclusive_budget_minutes)

    accepted = 0
    read = gross = paid = 0.0
    for i in range(arrived):
        price = quote_price(policy, state)
        offered = price if wtp is None else float(wtp[i])
        decision = decide(policy, state, predicted, predicted_benefit, offered)
        if decision.accepted:
            accepted += 1
            read += float(times[i])
            gross += float(rates[i] * times[i])
            paid += price
            state = commit(state, predicted)
        if adaptive:
            state = record_offer(state, decision.accepted, policy)

    opportunity = cfg.opportunity_rate * max(0.0, read - cfg.exclusive_budget_minutes)
    return (arrived, accepted, arrived - accepted, read, gross,
            opportunity, gross - opportunity, paid)


def run_replications(cfg, policy, time_model, scenario, replications):
    return [run_replication(cfg, policy, time_model, scenario, r)
            for r in replications]


def _chunks(count, jobs):
    size = -(-count // jobs)
    return [range(start, min(start + size, count))
            for start in range(0, count, size)]


def simulate_cycle(cfg, policy, time_model=None, scenario=None, jobs=1):
    """
    Simulate ``cfg.replications`` independent cycles.

    :param policy: A :class:`~.PricingPolicyConfig` or a policy kind.
    :param time_model: The :class:`~.ReadingTimeModel` whose prediction
        the policy plans with; the prior by default.
    :param scenario: A :class:`~.BenefitScenario` giving each sender a
        willingness to pay. Without one senders pay whatever is quoted.
    :param int jobs: Worker processes. Results do not depend on it.
    :return: A :class:`~.SimulationResult`.
    """
    policy = policy_for(policy, cfg)
    time_model = time_model if time_model is not None else prior_model()
    count = cfg.replications
    if jobs is None or jobs <= 1 or count < 2:
        rows = run_replications(cfg, policy, time_model, scenario, range(count))
    else:
        rows = []
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(run_replications, cfg, policy,
                                       time_model, scenario, chunk)
                       for chunk in _chunks(count, jobs)]
            for future in futures:
                rows.extend(future.result())
    result = summarize(np.array(rows, dtype=float).reshape(count, -1))
    logger.debug("Simulated %d cycles of %s at lambda %s: net %s (se %s)",
                 count, policy.kind, cfg.lambda_per_min,
                 result.net_benefit, result.net_benefit_stderr)
    return result
