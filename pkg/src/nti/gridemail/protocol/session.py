#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Session records, local events and the actions the state machines emit.

A step never performs I/O on the connection: it returns the frames to
send and the local work to do as actions, which the connection driver
carries out in order.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import copy

from nti.externalization.representation import WithRepr

from nti.gridemail.protocol.interfaces import IDLE
from nti.gridemail.protocol.interfaces import TERMINAL_STATES

from nti.schema.eqhash import EqHash

logger = __import__('logging').getLogger(__name__)


class _Session(object):

    state = IDLE

    def replace(self, **changes):
        result = copy.copy(self)
        for name, value in changes.items():
            if not hasattr(result, name):
                raise AttributeError(name)
            setattr(result, name, value)
        return result

    @property
    def terminal(self):
        return self.state in TERMINAL_STATES

    def __repr__(self):
        return '<%s %s %s>' % (type(self).__name__, self.state,
                               getattr(self, 'cos_id', None))


class SenderSession(_Session):
    """
    One attempt to deliver ``message`` under ``profile``.
    """

    cos_id = None
    price = None
    token = None
    feedback = None

    def __init__(self, profile, message, budget_remaining=None):
        self.profile = profile
        self.message = message
        self.budget_remaining = profile.budget if budget_remaining is None \
                                else budget_remaining

    @property
    def sender_id(self):
        return self.message.sender_id


class ReceiverSession(_Session):
    """
    The receiving side of one connection.
    """

    sender_id = None
    profile = None
    meta = None
    cos_id = None
    price = None
    token = None
    paid = 0.0
    accepted_id = None


# events


@WithRepr
class Submit(object):
    """
    Start the session.
    """


@WithRepr
@EqHash('token')
class TokenIssued(object):

    def __init__(self, token):
        self.token = token


@WithRepr
@EqHash('reason')
class TokenFailed(object):

    def __init__(self, reason=u'PaymentUnavailable'):
        self.reason = reason


@WithRepr
class ConnectionClosed(object):
    """
    The peer went away.
    """


# actions


@WithRepr
@EqHash('frame')
class Send(object):

    def __init__(self, frame):
        self.frame = frame

    @property
    def name(self):
        return self.frame.verb


@WithRepr
@EqHash('amount', 'cos_id')
class RequestToken(object):
    """
    Obtain a payment token of ``amount`` from the payment service.
    """

    name = 'RequestToken'

    def __init__(self, amount, cos_id=None):
        self.amount = amount
        self.cos_id = cos_id


@WithRepr
@EqHash('outcome', 'code', 'reason', 'price')
class Feedback(object):
    """
    The single terminal outcome of a sender session.
    """

    name = 'Feedback'

    def __init__(self, outcome, code=None, reason=None, price=None):
        self.outcome = outcome
        self.code = code
        self.reason = reason
        self.price = price


@WithRepr
@EqHash('message_id', 'cos_id')
class Alert(object):

    name = 'Alert'

    def __init__(self, message_id, cos_id):
        self.message_id = message_id
        self.cos_id = cos_id


@WithRepr
class Close(object):
    """
    Close the connection.
    """

    name = 'Close'

    def __eq__(self, other):
        return isinstance(other, Close)

    def __hash__(self):
        return hash(self.name)


def action_names(actions):
    return [action.name for action in actions]
