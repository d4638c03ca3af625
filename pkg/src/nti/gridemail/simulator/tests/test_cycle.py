#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import close_to
from hamcrest import assert_that
from hamcrest import greater_than
from hamcrest import less_than_or_equal_to

from nti.testing.matchers import validly_provides

import unittest

import numpy as np

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.selection.reading import prior_model

from nti.gridemail.simulator.analytic import expected_net_benefit

from nti.gridemail.simulator.config import SimConfig
from nti.gridemail.simulator.config import CycleMetrics

from nti.gridemail.simulator.cycle import policy_for
from nti.gridemail.simulator.cycle import simulate_cycle
from nti.gridemail.simulator.cycle import run_replication

from nti.gridemail.simulator.interfaces import METRIC_NAMES

from nti.gridemail.simulator.interfaces import ISimConfig
from nti.gridemail.simulator.interfaces import ICycleMetrics

from nti.gridemail.simulator.scenarios import correlated_scenario

NET = METRIC_NAMES.index('net_benefit')


def within(value, target, stderr, k=3.0):
    return abs(value - target) <= k * stderr + 1e-9


class TestConfig(unittest.TestCase):

    def test_defaults(self):
        cfg = SimConfig()
        assert_that(cfg, validly_provides(ISimConfig))
        assert_that(cfg.expected_arrivals, close_to(5.0, 1e-9))
        assert_that(cfg.replace(seed=5).seed, is_(5))
        assert_that(cfg.replace(seed=5).replications, is_(1000))

    def test_policy_names(self):
        cfg = SimConfig(exclusive_budget_minutes=20.0)
        policy = policy_for('time-cap', cfg)
        assert_that(policy.kind, is_(u'time_cap'))
        assert_that(policy.time_cap_minutes, is_(20.0))
        same = PricingPolicyConfig(kind=u'accept_all')
        assert_that(policy_for(same, cfg), is_(same))


class TestSimulateCycle(unittest.TestCase):

    def test_no_arrivals(self):
        cfg = SimConfig(lambda_per_min=0.0, replications=50, seed=42)
        result = simulate_cycle(cfg, 'accept_all')
        assert_that(result.net_benefit, is_(0.0))
        assert_that(result.net_benefit_stderr, is_(0.0))
        assert_that(result.mean.messages_arrived, is_(0.0))

    def test_accounting(self):
        cfg = SimConfig(lambda_per_min=1 / 30, replications=200, seed=9)
        for policy in ('accept_all', 'time_cap', 'fixed_price',
                       'expected_utility', 'adaptive_price'):
            result = simulate_cycle(cfg, policy)
            assert_that(result.mean, validly_provides(ICycleMetrics))
            for row in result.samples:
                metrics = CycleMetrics.from_row(row)
                ICycleMetrics.validateInvariants(metrics)
                assert_that(metrics.opportunity_cost,
                            close_to(10 * max(0.0, metrics.total_read_minutes - 15), 1e-9))

    def test_replay(self):
        cfg = SimConfig(lambda_per_min=1 / 45, replications=100, seed=123)
        first = simulate_cycle(cfg, 'time_cap')
        again = simulate_cycle(cfg, 'time_cap')
        assert_that(first == again, is_(True))
        other = simulate_cycle(cfg.replace(seed=124), 'time_cap')
        assert_that(first == other, is_(False))

    def test_replication_independent_of_count(self):
        cfg = SimConfig(lambda_per_min=1 / 45, replications=10, seed=5)
        longer = simulate_cycle(cfg.replace(replications=20), 'accept_all')
        shorter = simulate_cycle(cfg, 'accept_all')
        assert_that(np.array_equal(longer.samples[:10], shorter.samples),
                    is_(True))

    def test_jobs_do_not_change_results(self):
        cfg = SimConfig(lambda_per_min=1 / 60, replications=64, seed=42)
        serial = simulate_cycle(cfg, 'accept_all', jobs=1)
        parallel = simulate_cycle(cfg, 'accept_all', jobs=3)
        assert_that(serial == parallel, is_(True))

    def test_time_cap_bounds_accepted(self):
        cfg = SimConfig(lambda_per_min=1 / 10, replications=100, seed=1)
        result = simulate_cycle(cfg, 'time_cap')
        accepted = result.samples[:, METRIC_NAMES.index('messages_accepted')]
        assert_that(accepted.max(), less_than_or_equal_to(5))

    def test_headline_agreement(self):
        cfg = SimConfig(lambda_per_min=1 / 60, replications=10000, seed=42)
        result = simulate_cycle(cfg, 'accept_all')
        # gross benefit has the fluid value 4500 * lambda
        assert_that(within(result.gross_benefit, 75.0,
                           result.gross_benefit_stderr), is_(True))
        expected = expected_net_benefit('accept_all', cfg)
        assert_that(within(result.net_benefit, expected,
                           result.net_benefit_stderr), is_(True))

    def test_agreement_across_rates(self):
        for rate in (1 / 120, 1 / 90, 1 / 60, 1 / 45, 1 / 30):
            cfg = SimConfig(lambda_per_min=rate, replications=10000, seed=42)
            results = {}
            for policy in ('accept_all', 'time_cap'):
                result = results[policy] = simulate_cycle(cfg, policy)
                expected = expected_net_benefit(policy, cfg)
                assert_that(within(result.net_benefit, expected,
                                   result.net_benefit_stderr),
                            is_(True), (rate, policy))
            result = results['accept_all']
            assert_that(within(result.gross_benefit, 4500 * rate,
                               result.gross_benefit_stderr),
                        is_(True), rate)

    def test_time_cap_beats_accept_all_at_saturation(self):
        cfg = SimConfig(lambda_per_min=1 / 30, replications=1000, seed=42)
        capped = simulate_cycle(cfg, 'time_cap')
        everything = simulate_cycle(cfg, 'accept_all')
        assert_that(capped.net_benefit, greater_than(everything.net_benefit))

    def test_priced_without_scenario_pays_quote(self):
        cfg = SimConfig(lambda_per_min=1 / 60, replications=200, seed=3)
        free = simulate_cycle(cfg, 'accept_all')
        priced = simulate_cycle(cfg, PricingPolicyConfig(kind=u'fixed_price',
                                                         base_price=2.0))
        arrived = priced.samples[:, METRIC_NAMES.index('messages_arrived')]
        paid = priced.samples[:, METRIC_NAMES.index('payments_collected')]
        assert_that(np.allclose(paid, 2.0 * arrived), is_(True))
        # payments never enter the benefit
        assert_that(np.array_equal(free.samples[:, NET], priced.samples[:, NET]),
                    is_(True))

    def test_scenario_filters_by_willingness_to_pay(self):
        cfg = SimConfig(lambda_per_min=1 / 30, replications=200, seed=3)
        policy = PricingPolicyConfig(kind=u'fixed_price', base_price=5.0)
        result = simulate_cycle(cfg, policy, scenario=correlated_scenario())
        rejected = result.mean.messages_rejected
        assert_that(rejected, greater_than(0))
        single = run_replication(cfg, policy, prior_model(),
                                 correlated_scenario(), 0)
        assert_that(list(single), is_(list(result.samples[0])))
