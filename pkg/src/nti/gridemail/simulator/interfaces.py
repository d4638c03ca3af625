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

from zope.schema import Real
from zope.schema import Choice

from nti.schema.field import Int
from nti.schema.field import Dict
from nti.schema.field import Object
from nti.schema.field import TextLine
from nti.schema.field import ListOrTuple

#: Scenario kinds
CORRELATED = u'correlated'
RECIPIENT_SKEWED = u'recipient_skewed'
MIXED = u'mixed'
SCENARIO_KINDS = (CORRELATED, RECIPIENT_SKEWED, MIXED)

#: Closed-form policies
ANALYTIC_POLICIES = (u'accept_all', u'time_cap')

#: Metric names of :class:`ICycleMetrics`, in table order
METRIC_NAMES = ('messages_arrived', 'messages_accepted', 'messages_rejected',
                'total_read_minutes', 'gross_benefit', 'opportunity_cost',
                'net_benefit', 'payments_collected')

#: Smallest simulated reading time, in minutes
MIN_READ_MINUTES = 0.1

#: Accounting tolerance of averaged metrics
ACCOUNTING_EPSILON = 1e-6


def _finite(value):
    return value is None or math.isfinite(value)


class ISimConfig(interface.Interface):
    """
    The login-cycle model: Poisson arrivals over a cycle, normally
    distributed reading times and benefit rates, an exclusive reading
    budget and an opportunity cost past it.
    """

    lambda_per_min = Real(title=u"Arrival rate per minute", min=0.0,
                          required=True, default=1.0 / 60,
                          constraint=_finite)

    cycle_minutes = Real(title=u"Minutes between logins", min=0.0,
                         required=True, default=300.0, constraint=_finite)

    mean_read_minutes = Real(title=u"Mean reading time", min=0.0,
                             required=True, default=3.0, constraint=_finite)

    read_sd_minutes = Real(title=u"Reading time deviation", min=0.0,
                           required=True, default=1.0, constraint=_finite)

    mean_benefit_rate = Real(title=u"Mean benefit per reading minute",
                             required=True, default=5.0, constraint=_finite)

    benefit_rate_sd = Real(title=u"Benefit rate deviation", min=0.0,
                           required=True, default=2.0, constraint=_finite)

    exclusive_budget_minutes = Real(title=u"Minutes reserved for reading",
                                    min=0.0, required=True, default=15.0,
                                    constraint=_finite)

    opportunity_rate = Real(title=u"Benefit forgone per minute past the budget",
                            min=0.0, required=True, default=10.0,
                            constraint=_finite)

    seed = Int(title=u"Generator seed", min=0, max=2 ** 64 - 1,
               required=True, default=0)

    replications = Int(title=u"Independent cycles", min=1, required=True,
                       default=1000)

    @interface.invariant
    def positive_times(cfg):
        for name in ('cycle_minutes', 'mean_read_minutes',
                     'exclusive_budget_minutes'):
            if getattr(cfg, name) <= 0:
                raise interface.Invalid("%s must be positive" % name)


class ICycleMetrics(interface.Interface):
    """
    What one cycle, or the mean over several, produced.
    """

    messages_arrived = Real(title=u"Messages offered", min=0.0, required=True,
                            default=0.0)

    messages_accepted = Real(title=u"Messages accepted", min=0.0,
                             required=True, default=0.0)

    messages_rejected = Real(title=u"Messages rejected", min=0.0,
                             required=True, default=0.0)

    total_read_minutes = Real(title=u"Reading time of accepted messages",
                              min=0.0, required=True, default=0.0)

    gross_benefit = Real(title=u"Benefit of the accepted messages",
                         required=True, default=0.0)

    opportunity_cost = Real(title=u"Benefit forgone past the budget",
                            min=0.0, required=True, default=0.0)

    net_benefit = Real(title=u"Gross benefit less the opportunity cost",
                       required=True, default=0.0)

    payments_collected = Real(title=u"Payments; never part of the benefit",
                              min=0.0, required=True, default=0.0)

    @interface.invariant
    def accounting(metrics):
        if abs(metrics.net_benefit - (metrics.gross_benefit - metrics.opportunity_cost)) \
                > ACCOUNTING_EPSILON * max(1.0, abs(metrics.gross_benefit)):
            raise interface.Invalid("net_benefit must be gross less opportunity cost")
        if abs(metrics.messages_accepted + metrics.messages_rejected
               - metrics.messages_arrived) > ACCOUNTING_EPSILON * max(1.0, metrics.messages_arrived):
            raise interface.Invalid("accepted and rejected must add up to arrived")


class ISimulationResult(interface.Interface):

    replications = Int(title=u"Replications", min=1, required=True)

    mean = Object(ICycleMetrics, title=u"Mean metrics", required=True)

    stderr = Dict(title=u"Standard error per metric",
                  key_type=TextLine(title=u"metric"),
                  value_type=Real(title=u"standard error"),
                  required=True)


class IScenarioComponent(interface.Interface):
    """
    One population of messages: sender benefit ~ Normal(sender_mean,
    sender_sd) and receiver benefit = coupling * sender benefit +
    Normal(receiver_mean, receiver_sd).
    """

    name = TextLine(title=u"Component name", required=False)

    weight = Real(title=u"Mixture weight", min=0.0, max=1.0, required=True)

    sender_mean = Real(title=u"Mean sender benefit", required=True,
                       default=0.0, constraint=_finite)

    sender_sd = Real(title=u"Sender benefit deviation", min=0.0,
                     required=True, default=1.0, constraint=_finite)

    coupling = Real(title=u"Receiver benefit per unit of sender benefit",
                    required=True, default=0.0, constraint=_finite)

    receiver_mean = Real(title=u"Mean receiver benefit noise", required=True,
                         default=0.0, constraint=_finite)

    receiver_sd = Real(title=u"Receiver benefit noise deviation", min=0.0,
                       required=True, default=1.0, constraint=_finite)

    trusted_fraction = Real(title=u"Fraction of trusted senders", min=0.0,
                            max=1.0, required=True, default=0.0)


class IBenefitScenario(interface.Interface):
    """
    A mixture of message populations. A sender's willingness to pay is
    its benefit, and never negative.
    """

    kind = Choice(title=u"Scenario kind", values=SCENARIO_KINDS,
                  required=True)

    components = ListOrTuple(Object(IScenarioComponent),
                             title=u"Mixture components",
                             min_length=1, required=True)

    @interface.invariant
    def weights_sum_to_one(scenario):
        total = sum(c.weight for c in scenario.components)
        if abs(total - 1.0) > 1e-9:
            raise interface.Invalid("Mixture weights must sum to 1")
