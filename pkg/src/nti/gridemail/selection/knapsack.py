#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Choosing which messages and tasks fill a reading interval.

Items with a nonpositive benefit are never selected. Every budget
comparison allows :data:`~.FEASIBILITY_EPSILON` of slack.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import math

import numpy as np

from zope import interface

from nti.externalization.representation import WithRepr

from nti.gridemail.selection.interfaces import EXHAUSTIVE_LIMIT
from nti.gridemail.selection.interfaces import DEFAULT_ITEM_LIMIT
from nti.gridemail.selection.interfaces import DEFAULT_RESOLUTION
from nti.gridemail.selection.interfaces import FEASIBILITY_EPSILON

from nti.gridemail.selection.interfaces import ISelection
from nti.gridemail.selection.interfaces import ITaskItem

from nti.gridemail.selection.interfaces import SelectionCapacityError

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('id', 'minutes', 'benefit', 'kind')
@interface.implementer(ITaskItem)
class TaskItem(SchemaConfigured):
    createDirectFieldProperties(ITaskItem)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        ITaskItem.validateInvariants(self)

    @property
    def rate(self):
        return self.benefit / self.minutes


@WithRepr
@EqHash('ids', 'total_minutes', 'total_benefit')
@interface.implementer(ISelection)
class Selection(SchemaConfigured):
    createDirectFieldProperties(ISelection)

    def __len__(self):
        return len(self.ids)


def _selection(chosen):
    chosen = sorted(chosen, key=lambda item: item.id)
    return Selection(ids=tuple(item.id for item in chosen),
                     total_minutes=float(sum(item.minutes for item in chosen)),
                     total_benefit=float(sum(item.benefit for item in chosen)))


def _candidates(items, budget_minutes):
    if budget_minutes < 0:
        raise ValueError("budget_minutes must be nonnegative")
    items = list(items)
    ids = [item.id for item in items]
    if len(set(ids)) != len(ids):
        raise ValueError("Item ids must be unique")
    return sorted((item for item in items if item.benefit > 0),
                  key=lambda item: item.id)


def greedy_select(items, budget_minutes):
    """
    Take items by descending benefit rate (then descending benefit, then
    id) while they fit.
    """
    candidates = _candidates(items, budget_minutes)
    candidates.sort(key=lambda item: (-item.rate, -item.benefit, item.id))
    chosen, used = [], 0.0
    for item in candidates:
        if used + item.minutes <= budget_minutes + FEASIBILITY_EPSILON:
            chosen.append(item)
            used += item.minutes
    return _selection(chosen)


def _units(minutes, resolution):
    return int(math.ceil(minutes / resolution - FEASIBILITY_EPSILON))


def optimal_select(items, budget_minutes, resolution=DEFAULT_RESOLUTION,
                   limit=DEFAULT_ITEM_LIMIT):
    """
    The benefit-maximizing subset, by dynamic programming over time
    discretized at ``resolution`` minutes. Item times round up to whole
    units, so the result is exact for times on the grid and always
    feasible. Ties prefer fewer minutes, then the lexicographically
    smallest ids.

    :raises SelectionCapacityError: With more than ``limit`` items.
    """
    items = list(items)
    if len(items) > limit:
        raise SelectionCapacityError("%d items exceed the limit of %d"
                                     % (len(items), limit))
    candidates = _candidates(items, budget_minutes)
    capacity = int(math.floor(budget_minutes / resolution + FEASIBILITY_EPSILON))
    weights = [_units(item.minutes, resolution) for item in candidates]

    # reach[i][u]: highest benefit from candidates[i:] using exactly u units
    reach = np.full((len(candidates) + 1, capacity + 1), -np.inf)
    reach[-1, 0] = 0.0
    for i in range(len(candidates) - 1, -1, -1):
        reach[i] = reach[i + 1]
        weight = weights[i]
        if weight <= capacity:
            taken = reach[i + 1, :capacity + 1 - weight] + candidates[i].benefit
            reach[i, weight:] = np.maximum(reach[i, weight:], taken)

    target = reach[0].max()
    # smallest usage reaching the optimum
    units = int(np.flatnonzero(reach[0] >= target - FEASIBILITY_EPSILON)[0])
    chosen = []
    # walking in id order, take each item an optimal completion still allows
    for i, (item, weight) in enumerate(zip(candidates, weights)):
        if weight > units:
            continue
        if reach[i + 1, units - weight] + item.benefit >= target - FEASIBILITY_EPSILON:
            chosen.append(item)
            target -= item.benefit
            units -= weight
    return _selection(chosen)


def exhaustive_select(items, budget_minutes):
    """
    The optimal subset by enumerating every subset. Ties prefer fewer
    minutes, then the lexicographically smallest ids.
    """
    candidates = _candidates(items, budget_minutes)
    if len(candidates) > EXHAUSTIVE_LIMIT:
        raise SelectionCapacityError("Exhaustive search is limited to %d items"
                                     % EXHAUSTIVE_LIMIT)
    best_key, best_subset = None, ()
    for mask in range(1 << len(candidates)):
        subset = [item for bit, item in enumerate(candidates) if mask >> bit & 1]
        minutes = sum(item.minutes for item in subset)
        if minutes > budget_minutes + FEASIBILITY_EPSILON:
            continue
        benefit = sum(item.benefit for item in subset)
        key = (-round(benefit, 9), round(minutes, 9),
               tuple(item.id for item in subset))
        if best_key is None or key < best_key:
            best_key, best_subset = key, subset
    return _selection(best_subset)
