#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=inherit-non-class,no-self-argument,no-method-argument

import math

from zope import interface

from zope.schema import Bool
from zope.schema import Real
from zope.schema import Tuple
from zope.schema import Choice

from nti.schema.field import Int
from nti.schema.field import Dict
from nti.schema.field import TextLine
from nti.schema.field import ValidTextLine

#: Item kinds
MESSAGE = u'message'
TASK = u'task'
ITEM_KINDS = (MESSAGE, TASK)

DEFAULT_PRIOR_MEAN = 3.0
DEFAULT_PRIOR_VARIANCE = 1.0

#: Smallest predicted reading time, in minutes
MIN_PREDICTED_MINUTES = 0.1

#: Fewer observations than this fall back to the prior
MIN_OBSERVATIONS = 3

#: Knapsack time resolution, in minutes
DEFAULT_RESOLUTION = 0.1

DEFAULT_ITEM_LIMIT = 500

EXHAUSTIVE_LIMIT = 20

#: Tolerance of every budget comparison
FEASIBILITY_EPSILON = 1e-9


def _finite(value):
    return value is None or math.isfinite(value)


class SelectionCapacityError(ValueError):
    """
    Too many items for the requested solver.
    """


class IReadObservation(interface.Interface):

    sender_id = ValidTextLine(title=u"Sender id", required=True)

    size_bytes = Int(title=u"Message size", min=0, required=True)

    minutes = Real(title=u"Observed reading time", required=True,
                   constraint=_finite)

    @interface.invariant
    def positive_minutes(obs):
        if obs.minutes <= 0:
            raise interface.Invalid("minutes must be positive")


class IReadingTimeModel(interface.Interface):
    """
    Reading minutes as a linear function of size plus a per-sender offset.
    """

    intercept = Real(title=u"Intercept, in minutes", required=True,
                     default=DEFAULT_PRIOR_MEAN, constraint=_finite)

    slope = Real(title=u"Minutes per byte", required=True, default=0.0,
                 constraint=_finite)

    residual_variance = Real(title=u"Residual variance, in squared minutes",
                             min=0.0, required=True,
                             default=DEFAULT_PRIOR_VARIANCE)

    per_sender_offset = Dict(title=u"Offset per sender, in minutes",
                             key_type=TextLine(title=u"sender id"),
                             value_type=Real(title=u"minutes"),
                             required=False)

    prior_mean = Real(title=u"Prior mean reading time", required=True,
                      default=DEFAULT_PRIOR_MEAN)

    prior_variance = Real(title=u"Prior variance", min=0.0, required=True,
                          default=DEFAULT_PRIOR_VARIANCE)

    fallback = Bool(title=u"Whether the model is the prior", required=False,
                    default=True)

    @interface.invariant
    def positive_prior(model):
        if model.prior_mean <= 0:
            raise interface.Invalid("prior_mean must be positive")


class ITaskItem(interface.Interface):
    """
    A message or task competing for reading time.
    """

    id = ValidTextLine(title=u"Item id", min_length=1, required=True)

    minutes = Real(title=u"Time it takes", required=True,
                   constraint=_finite)

    benefit = Real(title=u"Benefit of doing it", required=True,
                   constraint=_finite)

    kind = Choice(title=u"Item kind", values=ITEM_KINDS, required=True,
                  default=MESSAGE)

    @interface.invariant
    def positive_minutes(item):
        if item.minutes <= 0:
            raise interface.Invalid("minutes must be positive")


class ISelection(interface.Interface):

    ids = Tuple(title=u"Selected item ids, sorted",
                value_type=TextLine(title=u"item id"),
                required=True)

    total_minutes = Real(title=u"Time of the selected items", min=0.0,
                         required=True)

    total_benefit = Real(title=u"Benefit of the selected items",
                         required=True)
