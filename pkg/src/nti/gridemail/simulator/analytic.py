#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Closed-form and exact expected net benefit of one login cycle.

:func:`analytic_net_benefit` is the fluid model: it charges the
opportunity cost on the expected reading time, giving ``4500 * lambda``
below saturation with the default parameters. :func:`expected_net_benefit`
is the expectation under the stochastic model the simulator samples,
which also pays for the spread of the reading time past the budget.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import math

import numpy as np

from scipy import stats

from nti.gridemail.policies.interfaces import TIME_CAP
from nti.gridemail.policies.interfaces import ACCEPT_ALL

from nti.gridemail.selection.reading import prior_model
from nti.gridemail.selection.reading import predict_read_time

from nti.gridemail.simulator.interfaces import MIN_READ_MINUTES
from nti.gridemail.simulator.interfaces import ANALYTIC_POLICIES

#: Poisson tail mass ignored by :func:`expected_net_benefit`
TAIL_MASS = 1e-12

logger = __import__('logging').getLogger(__name__)


def _policy_kind(policy):
    kind = getattr(policy, 'kind', policy)
    if kind not in ANALYTIC_POLICIES:
        raise ValueError("No closed form for policy %r" % (kind,))
    return kind


def _time_cap(policy, cfg):
    return getattr(policy, 'time_cap_minutes', cfg.exclusive_budget_minutes)


def analytic_net_benefit(policy, cfg):
    """
    The fluid net benefit of a cycle under ``accept_all`` or ``time_cap``.
    """
    kind = _policy_kind(policy)
    arrivals = cfg.lambda_per_min * cfg.cycle_minutes
    gross = cfg.mean_benefit_rate * cfg.mean_read_minutes * arrivals
    if kind == ACCEPT_ALL:
        reading = arrivals * cfg.mean_read_minutes
        excess = max(0.0, reading - cfg.exclusive_budget_minutes)
        return gross - cfg.opportunity_rate * excess
    return min(gross, cfg.mean_benefit_rate * _time_cap(policy, cfg))


def clamped_normal_moments(mean, sd, floor=MIN_READ_MINUTES):
    """
    The first two moments of ``max(X, floor)`` for X ~ Normal(mean, sd).
    """
    if sd == 0:
        value = max(mean, floor)
        return value, value * value
    alpha = (floor - mean) / sd
    below = stats.norm.cdf(alpha)
    above = stats.norm.sf(alpha)
    density = stats.norm.pdf(alpha)
    first = floor * below + mean * above + sd * density
    second = floor ** 2 * below + (mean ** 2 + sd ** 2) * above \
           + sd * (floor + mean) * density
    return float(first), float(second)


def accepted_by_time_cap(predicted_minutes, cap):
    """
    How many messages of ``predicted_minutes`` each a time cap admits,
    accumulating exactly as the policy does. None when unbounded.
    """
    if predicted_minutes <= 0:
        return None
    committed, count = 0.0, 0
    while committed + predicted_minutes <= cap:
        committed += predicted_minutes
        count += 1
    return count


def _expected_excess(count, first, variance, budget):
    # sum of ``count`` reading times, taken as normal
    if count == 0:
        return 0.0
    mean = count * first
    sd = math.sqrt(count * variance)
    if sd == 0:
        return max(0.0, mean - budget)
    d = (mean - budget) / sd
    return (mean - budget) * stats.norm.cdf(d) + sd * stats.norm.pdf(d)


def expected_net_benefit(policy, cfg, time_model=None):
    """
    The expected net benefit of one simulated cycle under ``accept_all``
    or ``time_cap``. Reading times are the clamped normals the simulator
    draws; the reading time of a given number of messages is taken as
    normal.
    """
    kind = _policy_kind(policy)
    arrivals = cfg.lambda_per_min * cfg.cycle_minutes
    if arrivals == 0:
        return 0.0
    first, second = clamped_normal_moments(cfg.mean_read_minutes,
                                           cfg.read_sd_minutes)
    variance = max(second - first * first, 0.0)
    cap = None
    if kind == TIME_CAP:
        model = time_model if time_model is not None else prior_model()
        predicted, _ = predict_read_time(model)
        cap = accepted_by_time_cap(predicted, _time_cap(policy, cfg))

    top = int(stats.poisson.isf(TAIL_MASS, arrivals)) + 1
    counts = np.arange(top + 1)
    pmf = stats.poisson.pmf(counts, arrivals)
    accepted = counts if cap is None else np.minimum(counts, cap)

    gross = cfg.mean_benefit_rate * first * float(np.dot(pmf, accepted))
    excess = float(sum(p * _expected_excess(int(k), first, variance,
                                            cfg.exclusive_budget_minutes)
                       for p, k in zip(pmf, accepted)))
    return gross - cfg.opportunity_rate * excess
