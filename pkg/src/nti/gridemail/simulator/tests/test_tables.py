#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import raises
from hamcrest import calling
from hamcrest import has_entries
from hamcrest import assert_that
from hamcrest import starts_with

import io
import unittest

import simplejson

from nti.gridemail.simulator.config import SimConfig

from nti.gridemail.simulator.cycle import simulate_cycle

from nti.gridemail.simulator.tables import SIMULATION_COLUMNS

from nti.gridemail.simulator.tables import read_csv
from nti.gridemail.simulator.tables import format_cell
from nti.gridemail.simulator.tables import render_table
from nti.gridemail.simulator.tables import simulation_row

from nti.gridemail.simulator.sweeps import PRICE_COLUMNS
from nti.gridemail.simulator.sweeps import LAMBDA_COLUMNS


class TestTables(unittest.TestCase):

    def test_cells(self):
        assert_that(format_cell(None), is_(u''))
        assert_that(format_cell(True), is_(u'true'))
        assert_that(format_cell(3), is_(u'3'))
        assert_that(format_cell(0.1), is_(u'0.1'))
        assert_that(float(format_cell(1 / 3)), is_(1 / 3))

    def test_csv_header(self):
        text = render_table([], LAMBDA_COLUMNS)
        assert_that(text, is_(u'policy,lambda,analytic,expected,simulated_mean,'
                              u'simulated_stderr,gross_mean,gross_stderr,'
                              u'replications\n'))
        assert_that(render_table([], PRICE_COLUMNS), starts_with(u'scenario,price,'))

    def test_values_read_back_exactly(self):
        cfg = SimConfig(lambda_per_min=1 / 60, replications=20, seed=42)
        result = simulate_cycle(cfg, 'accept_all')
        row = simulation_row(u'accept_all', cfg, result)
        text = render_table([row], SIMULATION_COLUMNS)
        parsed = read_csv(io.StringIO(text))[0]
        assert_that(parsed['policy'], is_(u'accept_all'))
        assert_that(float(parsed['net_benefit']), is_(result.net_benefit))
        assert_that(float(parsed['lambda']), is_(1 / 60))

    def test_json(self):
        rows = [{'policy': u'time_cap', 'lambda': 0.5, 'analytic': None}]
        data = simplejson.loads(render_table(rows, LAMBDA_COLUMNS, 'json'))
        assert_that(data[0], has_entries('policy', u'time_cap',
                                         'lambda', 0.5,
                                         'analytic', None))

    def test_unknown_format(self):
        assert_that(calling(render_table).with_args([], LAMBDA_COLUMNS, 'xml'),
                    raises(ValueError))
