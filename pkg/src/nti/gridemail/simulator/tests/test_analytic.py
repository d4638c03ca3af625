#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import none
from hamcrest import raises
from hamcrest import calling
from hamcrest import close_to
from hamcrest import less_than
from hamcrest import assert_that

import unittest

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.simulator.analytic import accepted_by_time_cap
from nti.gridemail.simulator.analytic import analytic_net_benefit
from nti.gridemail.simulator.analytic import expected_net_benefit
from nti.gridemail.simulator.analytic import clamped_normal_moments

from nti.gridemail.simulator.config import SimConfig


def at(rate, **kwargs):
    return SimConfig(lambda_per_min=rate, **kwargs)


class TestClosedForm(unittest.TestCase):

    def test_accept_all(self):
        assert_that(analytic_net_benefit('accept_all', at(1 / 60)),
                    close_to(75.0, 1e-9))
        assert_that(analytic_net_benefit('accept_all', at(1 / 30)),
                    close_to(0.0, 1e-9))
        assert_that(analytic_net_benefit('accept_all', at(1 / 90)),
                    close_to(50.0, 1e-9))
        assert_that(analytic_net_benefit('accept_all', at(1 / 120)),
                    close_to(37.5, 1e-9))

    def test_below_saturation_is_linear(self):
        for rate in (0.0, 1 / 300, 1 / 120, 1 / 61):
            assert_that(analytic_net_benefit('accept_all', at(rate)),
                        close_to(4500 * rate, 1e-9))

    def test_past_saturation(self):
        for rate in (1 / 50, 1 / 40, 1 / 20):
            expected = 4500 * rate - 10 * (900 * rate - 15)
            assert_that(analytic_net_benefit('accept_all', at(rate)),
                        close_to(expected, 1e-9))

    def test_time_cap_plateau(self):
        assert_that(analytic_net_benefit('time_cap', at(1 / 120)),
                    close_to(37.5, 1e-9))
        assert_that(analytic_net_benefit('time_cap', at(1 / 60)),
                    close_to(75.0, 1e-9))
        assert_that(analytic_net_benefit('time_cap', at(1 / 30)),
                    close_to(75.0, 1e-9))
        policy = PricingPolicyConfig(kind=u'time_cap', time_cap_minutes=15.0)
        assert_that(analytic_net_benefit(policy, at(1 / 10)),
                    close_to(75.0, 1e-9))

    def test_other_policies_have_no_closed_form(self):
        assert_that(calling(analytic_net_benefit).with_args('fixed_price', at(1 / 60)),
                    raises(ValueError))
        assert_that(calling(expected_net_benefit).with_args('expected_utility', at(1 / 60)),
                    raises(ValueError))


class TestExpectation(unittest.TestCase):

    def test_clamped_moments(self):
        assert_that(clamped_normal_moments(3.0, 0.0), is_((3.0, 9.0)))
        assert_that(clamped_normal_moments(-1.0, 0.0), is_((0.1, 0.1 * 0.1)))
        first, second = clamped_normal_moments(3.0, 1.0)
        assert_that(first, close_to(3.0, 1e-3))
        assert_that(second - first * first, close_to(1.0, 1e-2))

    def test_accepted_by_time_cap(self):
        assert_that(accepted_by_time_cap(3.0, 15.0), is_(5))
        assert_that(accepted_by_time_cap(4.0, 15.0), is_(3))
        assert_that(accepted_by_time_cap(16.0, 15.0), is_(0))
        assert_that(accepted_by_time_cap(0.0, 15.0), is_(none()))

    def test_no_arrivals(self):
        assert_that(expected_net_benefit('accept_all', at(0.0)), is_(0.0))
        assert_that(expected_net_benefit('time_cap', at(0.0)), is_(0.0))

    def test_variance_costs_the_recipient(self):
        # the spread of reading time past the budget is charged too
        for rate in (1 / 90, 1 / 60, 1 / 30):
            cfg = at(rate)
            assert_that(expected_net_benefit('accept_all', cfg),
                        less_than(analytic_net_benefit('accept_all', cfg)))

    def test_time_cap_dominates_at_saturation(self):
        cfg = at(1 / 30)
        assert_that(expected_net_benefit('accept_all', cfg),
                    less_than(expected_net_benefit('time_cap', cfg)))
