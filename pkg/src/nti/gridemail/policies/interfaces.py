#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Admission and pricing policy interfaces.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=inherit-non-class,no-self-argument,no-method-argument

import math

from zope import interface

from zope.schema import Real
from zope.schema import Bool
from zope.schema import Choice

from nti.schema.field import Int
from nti.schema.field import ValidTextLine


def _finite(value):
    return value is None or math.isfinite(value)


#: Policy kinds
ACCEPT_ALL = u'accept_all'
TIME_CAP = u'time_cap'
FIXED_PRICE = u'fixed_price'
ADAPTIVE_PRICE = u'adaptive_price'
CONGESTION_PRICE = u'congestion_price'
EXPECTED_UTILITY = u'expected_utility'

POLICY_KINDS = (ACCEPT_ALL, TIME_CAP, FIXED_PRICE, ADAPTIVE_PRICE,
                CONGESTION_PRICE, EXPECTED_UTILITY)

PRICED_KINDS = (FIXED_PRICE, ADAPTIVE_PRICE, CONGESTION_PRICE)

#: Decision outcomes
ACCEPT = u'Accept'
REJECT = u'Reject'
NEEDS_PAYMENT = u'NeedsPayment'

OUTCOMES = (ACCEPT, REJECT, NEEDS_PAYMENT)

#: Decision reasons
ACCEPTED = u'Accepted'
TIME_CAP_EXCEEDED = u'TimeCapExceeded'
PAYMENT_REQUIRED = u'PaymentRequired'
NEGATIVE_EXPECTED_UTILITY = u'NegativeExpectedUtility'

REASONS = (ACCEPTED, TIME_CAP_EXCEEDED, PAYMENT_REQUIRED,
           NEGATIVE_EXPECTED_UTILITY)

#: Wire response code for each non-accepting reason
REASON_CODES = {
    TIME_CAP_EXCEEDED: 429,
    NEGATIVE_EXPECTED_UTILITY: 429,
    PAYMENT_REQUIRED: 402,
}

DEFAULT_EXCLUSIVE_BUDGET_MINUTES = 15.0


class IPricingPolicyConfig(interface.Interface):
    """
    The admission policy a recipient runs for one class of service.
    """

    kind = Choice(title=u"Policy family",
                  values=POLICY_KINDS,
                  required=True,
                  default=ACCEPT_ALL)

    base_price = Real(title=u"Base price", min=0.0, required=True,
                      default=0.0, constraint=_finite)

    congestion_slope = Real(title=u"Price increase per queued message",
                            min=0.0, required=True, default=0.0,
                            constraint=_finite)

    adapt_gamma = Real(title=u"Multiplicative adaptive step",
                       min=0.0, max=1.0, required=True, default=0.1)

    adapt_window = Int(title=u"Offers between adaptive updates",
                       min=1, required=True, default=10)

    price_floor = Real(title=u"Lowest quotable price", min=0.0,
                       required=True, default=0.0, constraint=_finite)

    price_ceiling = Real(title=u"Highest quotable price; None for unbounded",
                         min=0.0, required=False, default=None,
                         constraint=_finite)

    time_cap_minutes = Real(title=u"Expected reading minutes accepted per cycle",
                            min=0.0, required=True, default=15.0,
                            constraint=_finite)

    opportunity_rate = Real(title=u"Benefit units forgone per minute past the budget",
                            min=0.0, required=True, default=10.0,
                            constraint=_finite)

    enforce_time_cap = Bool(title=u"Whether priced kinds also apply the time cap",
                            required=False, default=False)

    @interface.invariant
    def price_range(cfg):
        if cfg.base_price < cfg.price_floor:
            raise interface.Invalid("base_price below price_floor")
        if cfg.price_ceiling is not None and cfg.base_price > cfg.price_ceiling:
            raise interface.Invalid("base_price above price_ceiling")

    @interface.invariant
    def open_gamma(cfg):
        if not 0.0 < cfg.adapt_gamma < 1.0:
            raise interface.Invalid("adapt_gamma must lie strictly between 0 and 1")

    @interface.invariant
    def positive_time_cap(cfg):
        if cfg.time_cap_minutes <= 0:
            raise interface.Invalid("time_cap_minutes must be positive")


class IPolicyState(interface.Interface):
    """
    The mutable admission state of one recipient queue.
    """

    current_price = Real(title=u"Current adaptive price", min=0.0,
                         required=True, default=0.0)

    queue_length = Int(title=u"Messages waiting", min=0, required=True,
                       default=0)

    committed_minutes = Real(title=u"Expected reading time already accepted",
                             min=0.0, required=True, default=0.0)

    exclusive_budget_minutes = Real(title=u"Minutes reserved for reading",
                                    min=0.0, required=True,
                                    default=DEFAULT_EXCLUSIVE_BUDGET_MINUTES)

    window_accept_count = Int(title=u"Accepted offers in the window",
                              min=0, required=True, default=0)

    window_offer_count = Int(title=u"Offers in the window",
                             min=0, required=True, default=0)


class IDecision(interface.Interface):

    outcome = Choice(title=u"Outcome", values=OUTCOMES, required=True)

    reason = ValidTextLine(title=u"Reason code", required=True)

    price = Real(title=u"Required price when payment is needed",
                 min=0.0, required=False)

    accepted = interface.Attribute("True for an Accept outcome")

    @interface.invariant
    def priced_payment(decision):
        if decision.outcome == NEEDS_PAYMENT and not (decision.price or 0) > 0:
            raise interface.Invalid("NeedsPayment requires a positive price")
