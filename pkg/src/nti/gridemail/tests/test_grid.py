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
from hamcrest import assert_that

import random
import unittest

from nti.gridemail.catalog import Catalog
from nti.gridemail.catalog import canonical_catalog

from nti.gridemail.grid import classify
from nti.gridemail.grid import region_to_cos
from nti.gridemail.grid import classify_benefit

from nti.gridemail.interfaces import MUTUAL
from nti.gridemail.interfaces import NEITHER
from nti.gridemail.interfaces import SENDER_ONLY
from nti.gridemail.interfaces import RECEIVER_ONLY

from nti.gridemail.model import BenefitPoint


class TestGrid(unittest.TestCase):

    def test_quadrants(self):
        assert_that(classify_benefit(BenefitPoint(5, 5)), is_(MUTUAL))
        assert_that(classify_benefit(BenefitPoint(5, -1)), is_(SENDER_ONLY))
        assert_that(classify_benefit(BenefitPoint(-1, 5)), is_(RECEIVER_ONLY))
        assert_that(classify_benefit(BenefitPoint(-1, -1)), is_(NEITHER))

    def test_boundary_counts_as_beneficial(self):
        assert_that(classify_benefit(BenefitPoint(0, 0)), is_(MUTUAL))
        assert_that(classify(2.0, 1.0, (2.0, 3.0)), is_(SENDER_ONLY))

    def test_non_finite(self):
        assert_that(calling(classify).with_args(float('nan'), 0.0),
                    raises(ValueError))
        assert_that(calling(classify).with_args(0.0, 0.0, (0.0, float('inf'))),
                    raises(ValueError))

    def test_shift_away_keeps_region(self):
        rng = random.Random(3)
        for _ in range(200):
            s, r = rng.uniform(-10, 10), rng.uniform(-10, 10)
            region = classify(s, r)
            eps = rng.uniform(0.001, 5)
            shifted = classify(s + eps if s >= 0 else s - eps,
                               r + eps if r >= 0 else r - eps)
            assert_that(shifted, is_(region))

    def test_region_to_cos(self):
        catalog = canonical_catalog()
        assert_that(region_to_cos(RECEIVER_ONLY, catalog), is_(u'cos1'))
        assert_that(region_to_cos(SENDER_ONLY, catalog), is_(u'cos2'))
        assert_that(region_to_cos(MUTUAL, catalog), is_(u'cos3'))
        assert_that(region_to_cos(NEITHER, catalog), is_(none()))

        partial = Catalog([catalog[u'cos2']])
        assert_that(region_to_cos(RECEIVER_ONLY, partial), is_(none()))
        assert_that(region_to_cos(SENDER_ONLY, partial), is_(u'cos2'))

    def test_routing_is_deterministic(self):
        catalog = canonical_catalog()
        point = BenefitPoint(-3, 7)
        first = region_to_cos(classify_benefit(point), catalog)
        assert_that(region_to_cos(classify_benefit(point), catalog), is_(first))
