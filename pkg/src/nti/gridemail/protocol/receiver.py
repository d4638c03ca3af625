#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The receiver's state machine.

Checks run in a fixed order once the body arrives: payment (redeemed on
PAY), then the trusted-sender rule, then the sender's identity, then the
admission policy and queue capacity. A token redeemed for a message that
is not accepted is refunded.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from zope import event as zope_event

from nti.gridemail.interfaces import GridEmailError
from nti.gridemail.interfaces import MessageRejectedEvent

from nti.gridemail.internalization import ConfigurationError

from nti.gridemail.internalization import meta_from_external
from nti.gridemail.internalization import profile_from_external

from nti.gridemail.matching import match_cos

from nti.gridemail.model import Message
from nti.gridemail.model import compute_digest

from nti.gridemail.protocol.frames import End
from nti.gridemail.protocol.frames import Pay
from nti.gridemail.protocol.frames import Data
from nti.gridemail.protocol.frames import Quit
from nti.gridemail.protocol.frames import Fetch
from nti.gridemail.protocol.frames import Hello
from nti.gridemail.protocol.frames import NoCos
from nti.gridemail.protocol.frames import Query
from nti.gridemail.protocol.frames import Quote
from nti.gridemail.protocol.frames import Status
from nti.gridemail.protocol.frames import Accepted
from nti.gridemail.protocol.frames import Rejected
from nti.gridemail.protocol.frames import MessageFrame

from nti.gridemail.protocol.frames import check_token

from nti.gridemail.protocol.interfaces import DONE
from nti.gridemail.protocol.interfaces import IDLE
from nti.gridemail.protocol.interfaces import HELLO
from nti.gridemail.protocol.interfaces import FAILED
from nti.gridemail.protocol.interfaces import PAYING
from nti.gridemail.protocol.interfaces import QUOTED
from nti.gridemail.protocol.interfaces import COS_DENIED
from nti.gridemail.protocol.interfaces import STATUS_QUERY
from nti.gridemail.protocol.interfaces import ACCEPTED_CODE
from nti.gridemail.protocol.interfaces import DUPLICATE_TOKEN
from nti.gridemail.protocol.interfaces import IDENTITY_FAILED
from nti.gridemail.protocol.interfaces import REASON_IDENTITY
from nti.gridemail.protocol.interfaces import REASON_DUPLICATE
from nti.gridemail.protocol.interfaces import REASON_UNTRUSTED
from nti.gridemail.protocol.interfaces import REASON_VIOLATION
from nti.gridemail.protocol.interfaces import PROTOCOL_VIOLATION
from nti.gridemail.protocol.interfaces import REASON_INVALID_PAYMENT

from nti.gridemail.protocol.session import Send
from nti.gridemail.protocol.session import Alert
from nti.gridemail.protocol.session import Close
from nti.gridemail.protocol.session import ConnectionClosed

logger = __import__('logging').getLogger(__name__)


def _refund(session, deps):
    """
    Return the redeemed token of a session whose message was not
    accepted.
    """
    if session.token is None or session.accepted_id is not None:
        return session
    try:
        deps.payment.refund(session.token)
        logger.info("Refunded token for %s", session.sender_id)
    except Exception:  # pylint: disable=broad-except
        logger.exception("Failed to refund token of %s", session.sender_id)
    return session.replace(token=None, paid=0.0)


def _reject(session, deps, code, reason, price=None):
    session = _refund(session, deps)
    if session.meta is not None:
        zope_event.notify(MessageRejectedEvent(session.meta, code, reason))
    logger.warning("Rejected message from %s: %s %s", session.sender_id,
                   code, reason)
    return (session.replace(state=FAILED),
            [Send(Rejected(code, reason, price))])


def _violation(session, deps, detail):
    logger.warning("Protocol violation from %s: %s", session.sender_id, detail)
    return _reject(session, deps, PROTOCOL_VIOLATION, REASON_VIOLATION)


def _on_hello(session, hello, unused_deps):
    return session.replace(state=HELLO, sender_id=hello.sender_id), []


def _on_query(session, query, deps):
    try:
        profile = profile_from_external(query.profile or {})
        meta = meta_from_external(query.message or {})
    except ConfigurationError as e:
        return _violation(session, deps, str(e))
    if meta.sender_id != session.sender_id:
        return _violation(session, deps, u'Message sender differs from HELLO')
    try:
        check_token(meta.id, 'id')
    except ValueError as e:
        return _violation(session, deps, str(e))
    session = session.replace(profile=profile, meta=meta)
    if meta.recipient_id and meta.recipient_id != deps.recipient_id:
        return session.replace(state=FAILED), [Send(NoCos(u'UnknownRecipient'))]
    candidates = match_cos(profile, deps.catalog)
    if not candidates:
        return session.replace(state=FAILED), [Send(NoCos(u'NoMatch'))]
    cos = deps.catalog[candidates[0]]
    price, available = deps.quote(cos)
    session = session.replace(state=QUOTED, cos_id=cos.cos_id, price=price)
    return session, [Send(Quote(cos.cos_id, price, available))]


def _on_pay(session, pay, deps):
    try:
        amount = deps.payment.verify_and_redeem(pay.token, session.price,
                                                deps.recipient_id)
    except GridEmailError as e:
        if e.code == DUPLICATE_TOKEN:
            return _reject(session, deps, DUPLICATE_TOKEN, REASON_DUPLICATE)
        return _reject(session, deps, e.code, REASON_INVALID_PAYMENT)
    logger.info("Redeemed %s from %s for %s", amount, session.sender_id,
                session.cos_id)
    return session.replace(state=PAYING, token=pay.token, paid=amount), []


def _on_data(session, data, deps):
    meta = session.meta
    body = data.body
    digest = compute_digest(body)
    if len(body) != meta.size_bytes or (meta.digest and meta.digest != digest):
        return _violation(session, deps, u'Body does not match its metadata')
    cos = deps.catalog[session.cos_id]
    if cos.trusted_only and session.sender_id not in cos.trusted_senders:
        return _reject(session, deps, COS_DENIED, REASON_UNTRUSTED)
    if cos.requires_authentication:
        try:
            deps.identity.check_identity(session.sender_id, digest,
                                         meta.authenticator or u'')
        except GridEmailError:
            return _reject(session, deps, IDENTITY_FAILED, REASON_IDENTITY)
    message = Message(id=meta.id,
                      sender_id=meta.sender_id,
                      recipient_id=meta.recipient_id,
                      format_tag=meta.format_tag,
                      stamp=meta.stamp,
                      payment=session.token,
                      cos_id=cos.cos_id,
                      authenticator=meta.authenticator,
                      body=body)
    code, reason, price = deps.admit(cos, message, session.paid)
    if code != ACCEPTED_CODE:
        return _reject(session, deps, code, reason, price)
    session = session.replace(state=DONE, accepted_id=meta.id)
    actions = [Send(Accepted(meta.id))]
    if cos.alert:
        actions.append(Alert(meta.id, cos.cos_id))
    return session, actions


def _on_fetch(session, fetch, deps):
    try:
        messages = deps.fetch(fetch.cos_id, fetch.recipient_id,
                              fetch.credential, fetch.max_n)
    except GridEmailError as e:
        return session, [Send(Rejected(e.code, type(e).__name__))]
    actions = [Send(MessageFrame(m.id, m.sender_id, m.format_tag, m.body))
               for m in messages]
    actions.append(Send(End(len(messages))))
    return session, actions


def _on_status(session, status, deps):
    if status.state != STATUS_QUERY:
        return _violation(session, deps, u'STATUS asks with QUERY')
    return session, [Send(Status(status.message_id, deps.status(status.message_id)))]


def _on_quit(session, unused_event, deps):
    session = _refund(session, deps)
    state = FAILED if session.state == FAILED else DONE
    return session.replace(state=state), [Close()]


def _drain(session, unused_event, unused_deps):
    return session, []


_TRANSITIONS = {
    (IDLE, Hello): _on_hello,
    (IDLE, Fetch): _on_fetch,
    (IDLE, Status): _on_status,
    (HELLO, Query): _on_query,
    (QUOTED, Pay): _on_pay,
    (QUOTED, Data): _on_data,
    (PAYING, Data): _on_data,
    # pipelined frames after a rejection
    (FAILED, Pay): _drain,
    (FAILED, Data): _drain,
}


def receiver_fsm_step(session, event, deps):
    """
    Advance ``session`` by one received frame, or by
    :class:`.ConnectionClosed`.

    :param deps: The :class:`~.IReceiverBackend` of the recipient.
    :return: The new session and the actions to perform, in order.
    """
    if isinstance(event, (Quit, ConnectionClosed)):
        return _on_quit(session, event, deps)
    handler = _TRANSITIONS.get((session.state, type(event)))
    if handler is not None:
        return handler(session, event, deps)
    verb = getattr(event, 'verb', type(event).__name__)
    if session.terminal:
        logger.warning("Frame %s after the session ended", verb)
        return (session.replace(state=FAILED),
                [Send(Rejected(PROTOCOL_VIOLATION, REASON_VIOLATION)), Close()])
    return _violation(session, deps, u'Unexpected %s in %s' % (verb, session.state))
