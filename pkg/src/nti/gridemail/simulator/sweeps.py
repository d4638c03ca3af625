#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Parameter sweeps and the class of service experiment.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from collections import OrderedDict

import numpy as np

from nti.gridemail.catalog import Catalog
from nti.gridemail.catalog import canonical_catalog

from nti.gridemail.grid import classify
from nti.gridemail.grid import region_to_cos

from nti.gridemail.interfaces import OPEN

from nti.gridemail.model import QosDescriptor
from nti.gridemail.model import ClassOfService

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.policies.engine import drain
from nti.gridemail.policies.engine import commit
from nti.gridemail.policies.engine import decide
from nti.gridemail.policies.engine import quote_price

from nti.gridemail.policies.interfaces import FIXED_PRICE

from nti.gridemail.policies.state import initial_state

from nti.gridemail.simulator.analytic import expected_net_benefit
from nti.gridemail.simulator.analytic import analytic_net_benefit

from nti.gridemail.simulator.config import CycleMetrics

from nti.gridemail.simulator.cycle import policy_for
from nti.gridemail.simulator.cycle import simulate_cycle

from nti.gridemail.simulator.interfaces import MIN_READ_MINUTES
from nti.gridemail.simulator.interfaces import ANALYTIC_POLICIES

from nti.gridemail.simulator.interfaces import ISimConfig

from nti.gridemail.simulator.rng import normals
from nti.gridemail.simulator.rng import population_generator

from nti.gridemail.simulator.scenarios import DEFAULT_POPULATION

from nti.gridemail.simulator.scenarios import draw_population
from nti.gridemail.simulator.scenarios import mixed_scenario

#: Row keys of :func:`sweep_lambda`
LAMBDA_COLUMNS = ('policy', 'lambda', 'analytic', 'expected',
                  'simulated_mean', 'simulated_stderr',
                  'gross_mean', 'gross_stderr', 'replications')

#: Row keys of :func:`sweep_price`
PRICE_COLUMNS = ('scenario', 'price', 'accepted_count',
                 'mean_receiver_benefit', 'total_receiver_benefit',
                 'mean_sender_benefit')

#: Row keys of :func:`run_cos_experiment`
COS_COLUMNS = ('configuration', 'cos_id', 'messages_arrived',
               'messages_accepted', 'messages_rejected',
               'total_read_minutes', 'gross_benefit', 'opportunity_cost',
               'net_benefit', 'payments_collected')

BASELINE_COS = u'baseline'
UNROUTED = u'none'

DEFAULT_CYCLE_SIZE = 20

logger = __import__('logging').getLogger(__name__)


def sweep_lambda(cfg, lambdas, policies, time_model=None, jobs=1):
    """
    One row per arrival rate and policy, rate major, with the closed
    form (for policies that have one), the exact expectation and the
    simulated mean.
    """
    lambdas = list(lambdas)
    if not lambdas:
        raise ValueError("The arrival rate grid must not be empty")
    rows = []
    for rate in lambdas:
        point = cfg.replace(lambda_per_min=float(rate))
        for name in policies:
            policy = policy_for(name, point)
            kind = policy.kind
            closed = kind in ANALYTIC_POLICIES
            result = simulate_cycle(point, policy, time_model, jobs=jobs)
            rows.append(OrderedDict((
                ('policy', kind),
                ('lambda', float(rate)),
                ('analytic', analytic_net_benefit(policy, point) if closed else None),
                ('expected', expected_net_benefit(policy, point, time_model) if closed else None),
                ('simulated_mean', result.net_benefit),
                ('simulated_stderr', result.net_benefit_stderr),
                ('gross_mean', result.gross_benefit),
                ('gross_stderr', result.gross_benefit_stderr),
                ('replications', result.replications),
            )))
    return rows


def sweep_price(scenario, prices, cfg=None, seed=None, size=DEFAULT_POPULATION):
    """
    Filter one generated population by price: a message is sent iff its
    sender's willingness to pay covers the price.
    """
    prices = [float(p) for p in prices]
    if prices != sorted(prices):
        raise ValueError("Prices must be sorted ascending")
    if seed is None:
        seed = cfg.seed if cfg is not None else 0
    population = draw_population(scenario, size, population_generator(seed))
    wtp = population.willingness_to_pay
    rows = []
    for price in prices:
        sent = wtp >= price
        count = int(sent.sum())
        receiver = population.receiver_benefit[sent]
        rows.append(OrderedDict((
            ('scenario', scenario.kind),
            ('price', price),
            ('accepted_count', count),
            ('mean_receiver_benefit', float(receiver.mean()) if count else 0.0),
            ('total_receiver_benefit', float(receiver.sum())),
            ('mean_sender_benefit',
             float(population.sender_benefit[sent].mean()) if count else 0.0),
        )))
    return rows


class _Tally(object):

    __slots__ = ('arrived', 'accepted', 'read', 'gross', 'opportunity', 'paid')

    def __init__(self):
        self.arrived = self.accepted = 0
        self.read = self.gross = self.opportunity = self.paid = 0.0

    def add(self, other):
        for name in self.__slots__:
            setattr(self, name, getattr(self, name) + getattr(other, name))

    def metrics(self):
        return CycleMetrics(messages_arrived=self.arrived,
                            messages_accepted=self.accepted,
                            messages_rejected=self.arrived - self.accepted,
                            total_read_minutes=self.read,
                            gross_benefit=self.gross,
                            opportunity_cost=self.opportunity,
                            net_benefit=self.gross - self.opportunity,
                            payments_collected=self.paid)


class Outcome(object):
    """
    How one message of the class of service experiment fared.
    """

    __slots__ = ('sender_id', 'region', 'cos_id', 'price', 'accepted',
                 'code')

    def __init__(self, sender_id, region, cos_id, price, accepted, code):
        self.sender_id = sender_id
        self.region = region
        self.cos_id = cos_id
        self.price = price
        self.accepted = accepted
        self.code = code

    def __repr__(self):
        return '<Outcome %s %s %s %s>' % (self.sender_id, self.cos_id,
                                          self.accepted, self.code)


class CosExperimentResult(object):

    def __init__(self, per_cos, total, baseline, outcomes):
        self.per_cos = per_cos
        self.total = total
        self.baseline = baseline
        self.outcomes = outcomes

    @property
    def improvement(self):
        return self.total.net_benefit - self.baseline.net_benefit

    def rows(self):
        result = []
        for cos_id, metrics in self.per_cos.items():
            result.append(self._row(u'3cos', cos_id, metrics))
        result.append(self._row(u'3cos', u'total', self.total))
        result.append(self._row(u'baseline', BASELINE_COS, self.baseline))
        return result

    @staticmethod
    def _row(configuration, cos_id, metrics):
        row = OrderedDict((('configuration', configuration), ('cos_id', cos_id)))
        for name in COS_COLUMNS[2:]:
            row[name] = getattr(metrics, name)
        return row


def _route(catalog, population, index):
    region = classify(float(population.sender_benefit[index]),
                      float(population.receiver_benefit[index]))
    return region, region_to_cos(region, catalog)


def _offer(cos, state, sender_id, wtp, minutes):
    """
    Offer a message to ``cos``; returns (accepted, code, price, state).
    """
    if cos.trusted_only and sender_id not in cos.trusted_senders:
        return False, 403, 0.0, state
    if state.queue_length >= cos.capacity:
        return False, 507, 0.0, state
    price = quote_price(cos.pricing, state)
    decision = decide(cos.pricing, state, minutes, 0.0, wtp)
    if not decision.accepted:
        return False, decision.code, price, state
    return True, 250, price, commit(state, minutes)


def _run_configuration(catalog, route, population, read_minutes, cycle_size,
                       predicted, budget_minutes, opportunity_rate):
    """
    Offer every message in order. Each login cycle the accepted messages
    are read in arrival order; minutes past ``budget_minutes`` are
    charged to the class of the message being read.
    """
    states = {cos.cos_id: initial_state(cos.pricing) for cos in catalog}
    tallies = {cos.cos_id: _Tally() for cos in catalog}
    unrouted = _Tally()
    outcomes = []
    wtp = population.willingness_to_pay
    cycle_read = 0.0
    for index in range(len(population)):
        if index and index % cycle_size == 0:
            # the recipient logs in and reads everything queued
            states = {k: drain(s, s.queue_length, s.committed_minutes)
                      for k, s in states.items()}
            cycle_read = 0.0
        sender_id = population.sender_id(index)
        region, cos_id = route(index)
        if cos_id is None:
            unrouted.arrived += 1
            outcomes.append(Outcome(sender_id, region, None, 0.0, False, 550))
            continue
        cos = catalog[cos_id]
        tally = tallies[cos_id]
        tally.arrived += 1
        accepted, code, price, states[cos_id] = _offer(cos, states[cos_id],
                                                       sender_id, float(wtp[index]),
                                                       predicted)
        outcomes.append(Outcome(sender_id, region, cos_id, price, accepted, code))
        if accepted:
            tally.accepted += 1
            minutes = float(read_minutes[index])
            start = max(cycle_read, budget_minutes)
            tally.opportunity += opportunity_rate * max(0.0, cycle_read + minutes - start)
            cycle_read += minutes
            tally.read += minutes
            tally.gross += float(population.receiver_benefit[index])
            tally.paid += price
    return tallies, unrouted, outcomes


def _sim_param(cfg, name):
    if cfg is not None:
        return getattr(cfg, name)
    return ISimConfig[name].default


def run_cos_experiment(catalog=None, scenario=None, cfg=None, seed=None,
                       size=DEFAULT_POPULATION, cycle_size=DEFAULT_CYCLE_SIZE,
                       baseline_price=5.0):
    """
    Route a generated population through the benefit grid onto the
    classes of ``catalog`` and compare the receiver's benefit with a
    single fixed-price class run on the same population.

    Messages arrive in population order; every ``cycle_size`` messages
    the recipient logs in and the queues drain. Gross benefit is the
    receiver benefit of accepted messages; reading past the exclusive
    budget of a cycle costs the opportunity rate per minute.
    """
    scenario = scenario if scenario is not None else mixed_scenario()
    if seed is None:
        seed = cfg.seed if cfg is not None else 0
    gen = population_generator(seed)
    population = draw_population(scenario, size, gen)
    mean_read = _sim_param(cfg, 'mean_read_minutes')
    read_sd = _sim_param(cfg, 'read_sd_minutes')
    budget = _sim_param(cfg, 'exclusive_budget_minutes')
    rate = _sim_param(cfg, 'opportunity_rate')
    read_minutes = np.maximum(normals(gen, size, mean_read, read_sd),
                              MIN_READ_MINUTES)
    if catalog is None:
        catalog = canonical_catalog(trusted_senders=population.trusted_sender_ids)

    tallies, unrouted, outcomes = _run_configuration(
        catalog, lambda i: _route(catalog, population, i),
        population, read_minutes, cycle_size, mean_read, budget, rate)

    capacity = max(cos.capacity for cos in catalog)
    baseline_cos = ClassOfService(cos_id=BASELINE_COS,
                                  qos=QosDescriptor(accessibility=OPEN),
                                  pricing=PricingPolicyConfig(kind=FIXED_PRICE,
                                                              base_price=baseline_price),
                                  capacity=capacity)
    baseline_catalog = Catalog([baseline_cos])
    baseline_tallies, _, _ = _run_configuration(
        baseline_catalog, lambda i: (None, BASELINE_COS),
        population, read_minutes, cycle_size, mean_read, budget, rate)

    total = _Tally()
    total.add(unrouted)
    for tally in tallies.values():
        total.add(tally)
    per_cos = OrderedDict((cos_id, tallies[cos_id].metrics()) for cos_id in catalog.ids())
    per_cos[UNROUTED] = unrouted.metrics()
    result = CosExperimentResult(per_cos, total.metrics(),
                                 baseline_tallies[BASELINE_COS].metrics(),
                                 outcomes)
    logger.info("Class of service experiment: net %s, baseline %s",
                result.total.net_benefit, result.baseline.net_benefit)
    return result
