#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The sender's state machine.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from nti.externalization.externalization import to_external_object

from nti.gridemail.protocol.frames import Data
from nti.gridemail.protocol.frames import Pay
from nti.gridemail.protocol.frames import Quit
from nti.gridemail.protocol.frames import Hello
from nti.gridemail.protocol.frames import NoCos
from nti.gridemail.protocol.frames import Query
from nti.gridemail.protocol.frames import Quote
from nti.gridemail.protocol.frames import Frame
from nti.gridemail.protocol.frames import Accepted
from nti.gridemail.protocol.frames import Rejected

from nti.gridemail.protocol.interfaces import DONE
from nti.gridemail.protocol.interfaces import IDLE
from nti.gridemail.protocol.interfaces import HELLO
from nti.gridemail.protocol.interfaces import FAILED
from nti.gridemail.protocol.interfaces import PAYING
from nti.gridemail.protocol.interfaces import QUOTED
from nti.gridemail.protocol.interfaces import SENDING
from nti.gridemail.protocol.interfaces import REJECTED
from nti.gridemail.protocol.interfaces import DELIVERED
from nti.gridemail.protocol.interfaces import VIOLATION
from nti.gridemail.protocol.interfaces import ACCEPTED_CODE
from nti.gridemail.protocol.interfaces import BUDGET_EXCEEDED
from nti.gridemail.protocol.interfaces import PAYMENT_INVALID
from nti.gridemail.protocol.interfaces import NO_SUITABLE_CLASS
from nti.gridemail.protocol.interfaces import PROTOCOL_VIOLATION

from nti.gridemail.protocol.interfaces import ProtocolViolation

from nti.gridemail.protocol.session import Send
from nti.gridemail.protocol.session import Submit
from nti.gridemail.protocol.session import Feedback
from nti.gridemail.protocol.session import TokenFailed
from nti.gridemail.protocol.session import TokenIssued
from nti.gridemail.protocol.session import RequestToken

logger = __import__('logging').getLogger(__name__)


def query_document(profile, message):
    return {'profile': to_external_object(profile),
            'message': to_external_object(message.meta())}


def _finish(session, state, feedback):
    logger.debug("Sender session for %s ends: %s %s", session.message.id,
                 feedback.outcome, feedback.code)
    return (session.replace(state=state, feedback=feedback),
            [Send(Quit()), feedback])


def _violation(session, detail):
    logger.warning("Protocol violation from receiver: %s", detail)
    return _finish(session, FAILED,
                   Feedback(VIOLATION, PROTOCOL_VIOLATION, detail))


def _on_submit(session, unused_event):
    message = session.message
    document = query_document(session.profile, message)
    return (session.replace(state=HELLO),
            [Send(Hello(message.sender_id)), Send(Query(document))])


def _on_quote(session, quote):
    if not quote.available:
        return _finish(session, FAILED,
                       Feedback(NO_SUITABLE_CLASS, reason=u'Unavailable'))
    if quote.price > session.budget_remaining:
        return _finish(session, FAILED,
                       Feedback(BUDGET_EXCEEDED, price=quote.price))
    session = session.replace(cos_id=quote.cos_id, price=quote.price)
    if quote.price == 0:
        return (session.replace(state=SENDING),
                [Send(Data(session.message.body))])
    return (session.replace(state=QUOTED),
            [RequestToken(quote.price, quote.cos_id)])


def _on_nocos(session, nocos):
    return _finish(session, FAILED,
                   Feedback(NO_SUITABLE_CLASS, reason=nocos.reason))


def _on_rejected(session, rejected):
    return _finish(session, FAILED,
                   Feedback(REJECTED, rejected.code, rejected.reason,
                            rejected.price))


def _on_token(session, issued):
    session = session.replace(state=PAYING, token=issued.token,
                              budget_remaining=session.budget_remaining - session.price)
    return session, [Send(Pay(issued.token)), Send(Data(session.message.body))]


def _on_token_failed(session, failed):
    return _finish(session, FAILED,
                   Feedback(REJECTED, PAYMENT_INVALID, failed.reason))


def _on_accepted(session, accepted):
    if accepted.message_id != session.message.id:
        return _violation(session, u'Accepted a different message')
    return _finish(session, DONE, Feedback(DELIVERED, ACCEPTED_CODE))


_TRANSITIONS = {
    (IDLE, Submit): _on_submit,
    (HELLO, Quote): _on_quote,
    (HELLO, NoCos): _on_nocos,
    (HELLO, Rejected): _on_rejected,
    (QUOTED, TokenIssued): _on_token,
    (QUOTED, TokenFailed): _on_token_failed,
    (PAYING, Accepted): _on_accepted,
    (PAYING, Rejected): _on_rejected,
    (SENDING, Accepted): _on_accepted,
    (SENDING, Rejected): _on_rejected,
}


def sender_fsm_step(session, event):
    """
    Advance ``session`` by one event: a received frame or a local event.

    :return: The new session and the actions to perform, in order. A
        terminal transition ends with exactly one :class:`.Feedback`.
    :raises ProtocolViolation: For any event on a finished session, and
        for local events the current state does not expect.
    """
    if session.terminal:
        raise ProtocolViolation("Session is already %s" % session.state)
    handler = _TRANSITIONS.get((session.state, type(event)))
    if handler is not None:
        return handler(session, event)
    if isinstance(event, Frame):
        return _violation(session, u'Unexpected %s in %s' % (event.verb, session.state))
    raise ProtocolViolation("Unexpected %s in %s" % (type(event).__name__,
                                                     session.state))
