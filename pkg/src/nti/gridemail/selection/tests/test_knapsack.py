#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import raises
from hamcrest import calling
from hamcrest import close_to
from hamcrest import assert_that
from hamcrest import less_than_or_equal_to

from nti.testing.matchers import validly_provides

import random
import unittest

from nti.gridemail.selection.interfaces import ISelection

from nti.gridemail.selection.interfaces import SelectionCapacityError

from nti.gridemail.selection.knapsack import TaskItem
from nti.gridemail.selection.knapsack import greedy_select
from nti.gridemail.selection.knapsack import optimal_select
from nti.gridemail.selection.knapsack import exhaustive_select


def _items(*pairs):
    return [TaskItem(id=u'i%d' % i, minutes=m, benefit=b)
            for i, (m, b) in enumerate(pairs)]


def _random_items(rng, count):
    # Times lie on the 0.1 minute grid.
    return [TaskItem(id=u'r%02d' % i,
                     minutes=rng.randint(1, 60) / 10.0,
                     benefit=round(rng.uniform(-5, 30), 3),
                     kind=rng.choice((u'message', u'task')))
            for i in range(count)]


class TestWorkedInstances(unittest.TestCase):

    def test_greedy(self):
        selection = greedy_select(_items((3, 15), (2, 8), (4, 12)), 5)
        assert_that(selection, validly_provides(ISelection))
        assert_that(selection.ids, is_((u'i0', u'i1')))
        assert_that(selection.total_benefit, is_(23.0))

        selection = greedy_select(_items((3, 15), (4, 16)), 4)
        assert_that(selection.ids, is_((u'i0',)))
        assert_that(selection.total_benefit, is_(15.0))

        assert_that(greedy_select([], 10).total_benefit, is_(0.0))

    def test_optimal(self):
        selection = optimal_select(_items((3, 15), (4, 16)), 4)
        assert_that(selection.ids, is_((u'i1',)))
        assert_that(selection.total_benefit, is_(16.0))

        selection = optimal_select(_items((3, 15), (2, 8), (4, 12)), 5)
        assert_that(selection.total_benefit, is_(23.0))

        assert_that(optimal_select(_items((3, 15)), 0).ids, is_(()))

    def test_negative_benefit_never_selected(self):
        items = _items((1, -4), (1, 0), (1, 3))
        for select in (greedy_select, optimal_select, exhaustive_select):
            assert_that(select(items, 10).ids, is_((u'i2',)))

    def test_fewer_minutes_on_ties(self):
        items = _items((4, 10), (2, 10))
        assert_that(optimal_select(items, 10).ids, is_((u'i0', u'i1')))
        assert_that(optimal_select(items, 5).ids, is_((u'i1',)))
        assert_that(exhaustive_select(items, 5).ids, is_((u'i1',)))

    def test_smallest_ids_on_ties(self):
        items = _items((2, 5), (2, 5), (2, 5), (2, 5))
        for select in (optimal_select, exhaustive_select):
            assert_that(select(items, 4).ids, is_((u'i0', u'i1')))
            assert_that(select(reversed(items), 4).ids, is_((u'i0', u'i1')))

        items = _items((2, 10), (1, 5), (1, 5))
        for select in (optimal_select, exhaustive_select):
            assert_that(select(items, 2).ids, is_((u'i0',)))

        items = _items((1, 5), (1, 5), (2, 10))
        for select in (optimal_select, exhaustive_select):
            assert_that(select(items, 2).ids, is_((u'i0', u'i1')))

    def test_errors(self):
        assert_that(calling(greedy_select).with_args(_items((1, 1)), -1),
                    raises(ValueError))
        assert_that(calling(optimal_select).with_args(_items((1, 1), (2, 2)), 5, limit=1),
                    raises(SelectionCapacityError))
        duplicated = [TaskItem(id=u'x', minutes=1, benefit=1),
                      TaskItem(id=u'x', minutes=2, benefit=2)]
        assert_that(calling(optimal_select).with_args(duplicated, 5),
                    raises(ValueError))
        many = _random_items(random.Random(1), 25)
        for item in many:
            item.benefit = abs(item.benefit) + 1
        assert_that(calling(exhaustive_select).with_args(many, 5),
                    raises(SelectionCapacityError))


class TestOracle(unittest.TestCase):

    def test_matches_exhaustive(self):
        rng = random.Random(2024)
        for _ in range(1000):
            items = _random_items(rng, rng.randint(0, 12))
            budget = rng.randint(0, 150) / 10.0
            oracle = exhaustive_select(items, budget)
            optimal = optimal_select(items, budget)
            greedy = greedy_select(items, budget)
            assert_that(optimal.total_benefit, close_to(oracle.total_benefit, 1e-9))
            assert_that(optimal.total_minutes,
                        less_than_or_equal_to(budget + 1e-9))
            assert_that(greedy.total_minutes,
                        less_than_or_equal_to(budget + 1e-9))
            assert_that(greedy.total_benefit,
                        less_than_or_equal_to(oracle.total_benefit + 1e-9))

    def test_same_subset_as_exhaustive(self):
        # few distinct values, so ties are common
        rng = random.Random(7)
        for _ in range(300):
            items = [TaskItem(id=u'r%02d' % i,
                              minutes=rng.randint(1, 3),
                              benefit=rng.randint(1, 3))
                     for i in range(rng.randint(0, 10))]
            budget = rng.randint(0, 12)
            assert_that(optimal_select(items, budget).ids,
                        is_(exhaustive_select(items, budget).ids))

    def test_permutation_invariant(self):
        rng = random.Random(99)
        for _ in range(50):
            items = _random_items(rng, 10)
            budget = rng.randint(0, 200) / 10.0
            expected = (greedy_select(items, budget), optimal_select(items, budget))
            rng.shuffle(items)
            assert_that((greedy_select(items, budget), optimal_select(items, budget)),
                        is_(expected))
