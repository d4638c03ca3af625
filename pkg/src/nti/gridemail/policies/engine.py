#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Recipient-side admission decisions and price quoting.

Decision functions are pure. :func:`commit`, :func:`drain`,
:func:`record_offer` and :func:`update_adaptive` return updated copies of
the :class:`~.PolicyState`; callers serialize them per recipient.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from zope import interface

from nti.externalization.representation import WithRepr

from nti.gridemail.policies.interfaces import ACCEPT
from nti.gridemail.policies.interfaces import REJECT
from nti.gridemail.policies.interfaces import TIME_CAP
from nti.gridemail.policies.interfaces import ACCEPTED
from nti.gridemail.policies.interfaces import ACCEPT_ALL
from nti.gridemail.policies.interfaces import FIXED_PRICE
from nti.gridemail.policies.interfaces import PRICED_KINDS
from nti.gridemail.policies.interfaces import REASON_CODES
from nti.gridemail.policies.interfaces import NEEDS_PAYMENT
from nti.gridemail.policies.interfaces import ADAPTIVE_PRICE
from nti.gridemail.policies.interfaces import CONGESTION_PRICE
from nti.gridemail.policies.interfaces import EXPECTED_UTILITY
from nti.gridemail.policies.interfaces import PAYMENT_REQUIRED
from nti.gridemail.policies.interfaces import TIME_CAP_EXCEEDED
from nti.gridemail.policies.interfaces import NEGATIVE_EXPECTED_UTILITY

from nti.gridemail.policies.interfaces import IDecision

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('outcome', 'reason', 'price')
@interface.implementer(IDecision)
class Decision(SchemaConfigured):
    createDirectFieldProperties(IDecision)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        IDecision.validateInvariants(self)

    @property
    def accepted(self):
        return self.outcome == ACCEPT

    @property
    def code(self):
        """
        The wire response code of this decision.
        """
        return 250 if self.accepted else REASON_CODES[self.reason]


ACCEPT_DECISION = Decision(outcome=ACCEPT, reason=ACCEPTED)

REJECT_TIME_CAP = Decision(outcome=REJECT, reason=TIME_CAP_EXCEEDED)

REJECT_UTILITY = Decision(outcome=REJECT, reason=NEGATIVE_EXPECTED_UTILITY)


def needs_payment(price):
    return Decision(outcome=NEEDS_PAYMENT, reason=PAYMENT_REQUIRED,
                    price=price)


def quote_price(cfg, state):
    """
    The price a sender must pay for the next message.
    """
    kind = cfg.kind
    if kind == FIXED_PRICE:
        return cfg.base_price
    if kind == CONGESTION_PRICE:
        price = cfg.base_price + cfg.congestion_slope * state.queue_length
        return cfg.clamp(price)
    if kind == ADAPTIVE_PRICE:
        return state.current_price
    return 0.0


def _within_time_cap(cfg, state, predicted_minutes):
    return state.committed_minutes + predicted_minutes <= cfg.time_cap_minutes


def decide(cfg, state, predicted_minutes, predicted_benefit=0.0,
           offered_payment=0.0):
    """
    Decide whether to accept one offered message.

    :param predicted_minutes: The expected reading time of the message.
    :param predicted_benefit: The expected benefit of reading it; only the
        expected-utility policy looks at it.
    :param offered_payment: What the sender attached; only the priced
        kinds look at it.
    """
    if predicted_minutes < 0:
        raise ValueError("predicted_minutes must be nonnegative")
    kind = cfg.kind
    if kind == ACCEPT_ALL:
        return ACCEPT_DECISION
    if kind == TIME_CAP:
        if _within_time_cap(cfg, state, predicted_minutes):
            return ACCEPT_DECISION
        return REJECT_TIME_CAP
    if kind in PRICED_KINDS:
        if      cfg.enforce_time_cap \
            and not _within_time_cap(cfg, state, predicted_minutes):
            return REJECT_TIME_CAP
        price = quote_price(cfg, state)
        if offered_payment >= price:
            return ACCEPT_DECISION
        return needs_payment(price)
    assert kind == EXPECTED_UTILITY, kind
    if state.committed_minutes + predicted_minutes <= state.exclusive_budget_minutes:
        return ACCEPT_DECISION if predicted_benefit > 0 else REJECT_UTILITY
    # past the budget the whole reading time is charged
    if predicted_benefit > cfg.opportunity_rate * predicted_minutes:
        return ACCEPT_DECISION
    return REJECT_UTILITY


def commit(state, predicted_minutes):
    """
    Record an accepted message.
    """
    return state.replace(committed_minutes=state.committed_minutes + predicted_minutes,
                         queue_length=state.queue_length + 1)


def drain(state, served_count, served_minutes=0.0):
    """
    Release messages that left the queue.
    """
    if served_count < 0 or served_minutes < 0:
        raise ValueError("served amounts must be nonnegative")
    return state.replace(queue_length=max(0, state.queue_length - int(served_count)),
                         committed_minutes=max(0.0, state.committed_minutes - served_minutes))


def update_adaptive(cfg, state):
    """
    Move the adaptive price toward the time cap: up when the projected load
    exceeds it, down otherwise. The offer window is reset.
    """
    if cfg.kind != ADAPTIVE_PRICE:
        raise ValueError("update_adaptive requires an adaptive_price policy")
    if state.window_offer_count == 0:
        return state
    load = state.committed_minutes / cfg.time_cap_minutes
    if load > 1:
        price = state.current_price * (1 + cfg.adapt_gamma)
    else:
        price = state.current_price * (1 - cfg.adapt_gamma)
    price = cfg.clamp(price)
    logger.debug("Adaptive price %s -> %s (load %.3f)",
                 state.current_price, price, load)
    return state.replace(current_price=price,
                         window_accept_count=0,
                         window_offer_count=0)


def record_offer(state, accepted, cfg=None):
    """
    Count one offer in the adaptive window. With an adaptive ``cfg`` the
    controller runs once the window is full.
    """
    state = state.replace(window_offer_count=state.window_offer_count + 1,
                          window_accept_count=state.window_accept_count + int(bool(accepted)))
    if      cfg is not None \
        and cfg.kind == ADAPTIVE_PRICE \
        and state.window_offer_count >= cfg.adapt_window:
        state = update_adaptive(cfg, state)
    return state
