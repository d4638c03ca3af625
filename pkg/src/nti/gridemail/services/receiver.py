#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The receiver daemon: admission per class of service, durable queues,
alerts and retrieval for one recipient.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import socket
import threading

from zope import interface

from zope import event as zope_event

from nti.gridemail.interfaces import GridEmailError
from nti.gridemail.interfaces import MessageAcceptedEvent

from nti.gridemail.internalization import load_catalog
from nti.gridemail.internalization import load_scoring_config

from nti.gridemail.policies.engine import decide
from nti.gridemail.policies.engine import drain
from nti.gridemail.policies.engine import commit
from nti.gridemail.policies.engine import quote_price
from nti.gridemail.policies.engine import record_offer

from nti.gridemail.policies.interfaces import ACCEPTED
from nti.gridemail.policies.interfaces import EXPECTED_UTILITY

from nti.gridemail.policies.state import initial_state

from nti.gridemail.protocol.codec import FrameReader

from nti.gridemail.protocol.codec import encode_frame

from nti.gridemail.protocol.frames import End
from nti.gridemail.protocol.frames import Quit
from nti.gridemail.protocol.frames import Fetch
from nti.gridemail.protocol.frames import Status
from nti.gridemail.protocol.frames import Rejected
from nti.gridemail.protocol.frames import MessageFrame

from nti.gridemail.protocol.interfaces import QUEUE_FULL
from nti.gridemail.protocol.interfaces import STATUS_QUERY
from nti.gridemail.protocol.interfaces import STATUS_QUEUED
from nti.gridemail.protocol.interfaces import ACCEPTED_CODE
from nti.gridemail.protocol.interfaces import STATUS_UNKNOWN
from nti.gridemail.protocol.interfaces import DUPLICATE_TOKEN
from nti.gridemail.protocol.interfaces import REASON_VIOLATION
from nti.gridemail.protocol.interfaces import STATUS_DELIVERED
from nti.gridemail.protocol.interfaces import REASON_QUEUE_FULL
from nti.gridemail.protocol.interfaces import PROTOCOL_VIOLATION
from nti.gridemail.protocol.interfaces import REASON_DUPLICATE_MESSAGE

from nti.gridemail.protocol.interfaces import IReceiverBackend

from nti.gridemail.protocol.interfaces import ProtocolViolation

from nti.gridemail.protocol.receiver import receiver_fsm_step

from nti.gridemail.protocol.session import Send
from nti.gridemail.protocol.session import Alert
from nti.gridemail.protocol.session import Close
from nti.gridemail.protocol.session import ReceiverSession
from nti.gridemail.protocol.session import ConnectionClosed

from nti.gridemail.scoring import score_message

from nti.gridemail.selection.reading import prior_model
from nti.gridemail.selection.reading import predict_read_time

from nti.gridemail.services.alerts import AlertDispatcher

from nti.gridemail.services.alerts import sink_from_config

from nti.gridemail.services.config import resolve

from nti.gridemail.services.identity import IdentityRegistry

from nti.gridemail.services.interfaces import QUEUED
from nti.gridemail.services.interfaces import DELIVERED

from nti.gridemail.services.interfaces import QueueFull
from nti.gridemail.services.interfaces import DuplicateMessage

from nti.gridemail.services.interfaces import ERRORS_BY_NAME

from nti.gridemail.services.ledger import TokenLedger

from nti.gridemail.services.lines import PaymentClient
from nti.gridemail.services.lines import IdentityClient

from nti.gridemail.services.queues import QueueStore

from nti.gridemail.services.server import ServiceServer

#: Seconds a retrieval client waits on the receiver
DEFAULT_TIMEOUT = 30.0

_STATUS = {
    QUEUED: STATUS_QUEUED,
    DELIVERED: STATUS_DELIVERED,
}

logger = __import__('logging').getLogger(__name__)


@interface.implementer(IReceiverBackend)
class ReceiverService(object):
    """
    The shared state behind every connection to one recipient's
    receiver. Admission and queueing happen under one lock so the policy
    state and the queues agree.

    :param catalog: The recipient's :class:`~.Catalog`.
    :param payment: An :class:`~.IPaymentService`; an in-process
        :class:`~.TokenLedger` when omitted.
    :param identity: An :class:`~.IIdentityService`; an empty registry
        when omitted.
    :param scoring: A :class:`~.ScoringConfig` giving the predicted
        benefit of a message. Without one the predicted benefit is 0.
    """

    def __init__(self, catalog, recipient_id, credential=None, store=None,
                 payment=None, identity=None, scoring=None,
                 reading_model=None, alerts=None, data_dir=None):
        self.catalog = catalog
        self.recipient_id = recipient_id
        if store is None:
            capacities = {cos.cos_id: cos.capacity for cos in catalog}
            store = QueueStore(capacities, data_dir=data_dir,
                               recipient_id=recipient_id,
                               credential=credential)
        self.store = store
        self.payment = TokenLedger() if payment is None else payment
        self.identity = IdentityRegistry() if identity is None else identity
        self.scoring = scoring
        self.reading_model = reading_model or prior_model()
        self.alerts = alerts
        self._lock = threading.RLock()
        self._minutes = {}
        self._states = {}
        for cos in catalog:
            self._states[cos.cos_id] = self._recovered_state(cos)
            if cos.pricing.kind == EXPECTED_UTILITY and scoring is None:
                logger.warning("Class %s weighs benefit but no scoring is "
                               "configured", cos.cos_id)

    def _recovered_state(self, cos):
        state = initial_state(cos.pricing)
        for entry in self.store.entries(cos.cos_id):
            if entry.state == QUEUED:
                minutes = self.predicted_minutes(entry.message)
                self._minutes[entry.message.id] = minutes
                state = commit(state, minutes)
        return state

    def predicted_minutes(self, message):
        minutes, _ = predict_read_time(self.reading_model, message.sender_id,
                                       message.size_bytes)
        return minutes

    def predicted_benefit(self, message):
        if self.scoring is None:
            return 0.0
        stamp_valid = self.scoring.stamp_is_valid(message.stamp)
        return score_message(message, self.scoring, stamp_valid).total

    def policy_state(self, cos_id):
        return self._states[cos_id]

    def quote(self, cos):
        with self._lock:
            price = quote_price(cos.pricing, self._states[cos.cos_id])
            available = self.store.length(cos.cos_id) < cos.capacity
        return price, available

    def admit(self, cos, message, paid):
        """
        Run the admission policy of ``cos`` on ``message`` and queue it.

        :return: ``(code, reason, price)``; the price is set when more
            payment would be needed.
        """
        minutes = self.predicted_minutes(message)
        benefit = self.predicted_benefit(message)
        with self._lock:
            state = self._states[cos.cos_id]
            decision = decide(cos.pricing, state, minutes, benefit, paid)
            if not decision.accepted:
                self._states[cos.cos_id] = record_offer(state, False, cos.pricing)
                return decision.code, decision.reason, decision.price
            try:
                receipt_id = self.store.enqueue(cos.cos_id, message)
            except QueueFull:
                self._states[cos.cos_id] = record_offer(state, False, cos.pricing)
                return QUEUE_FULL, REASON_QUEUE_FULL, None
            except DuplicateMessage:
                return DUPLICATE_TOKEN, REASON_DUPLICATE_MESSAGE, None
            state = commit(state, minutes)
            self._states[cos.cos_id] = record_offer(state, True, cos.pricing)
            self._minutes[message.id] = minutes
        zope_event.notify(MessageAcceptedEvent(message, cos.cos_id, receipt_id))
        return ACCEPTED_CODE, ACCEPTED, None

    def fetch(self, cos_id, recipient_id, credential, max_n):
        with self._lock:
            messages = self.store.fetch(cos_id, recipient_id, credential, max_n)
            if messages:
                minutes = sum(self._minutes.pop(m.id, 0.0) for m in messages)
                self._states[cos_id] = drain(self._states[cos_id],
                                             len(messages), minutes)
        if messages and self.alerts is not None:
            self.alerts.forget(m.id for m in messages)
        logger.info("Fetched %d messages from %s", len(messages), cos_id)
        return messages

    def status(self, message_id):
        return _STATUS.get(self.store.status(message_id), STATUS_UNKNOWN)

    def dispatch_alert(self, message_id, cos_id):
        if self.alerts is None:
            logger.warning("No alert sink for %s", message_id)
            return None
        return self.alerts.dispatch(message_id, cos_id)

    def _perform(self, actions, wfile):
        """
        Carry out ``actions``; False once the connection should close.
        """
        for action in actions:
            if isinstance(action, Send):
                wfile.write(encode_frame(action.frame))
            elif isinstance(action, Alert):
                wfile.flush()
                self.dispatch_alert(action.message_id, action.cos_id)
            elif isinstance(action, Close):
                wfile.flush()
                return False
        wfile.flush()
        return True

    def handle_connection(self, rfile, wfile):
        """
        Serve one connection until QUIT or end of stream.
        """
        reader = FrameReader(rfile)
        session = ReceiverSession()
        try:
            while True:
                try:
                    frame = reader.read_frame()
                except ProtocolViolation as e:
                    logger.warning("Undecodable frame: %s", e)
                    wfile.write(encode_frame(Rejected(PROTOCOL_VIOLATION,
                                                      REASON_VIOLATION)))
                    wfile.flush()
                    break
                if frame is None:
                    break
                logger.debug("Received %s in %s", frame.verb, session.state)
                session, actions = receiver_fsm_step(session, frame, self)
                if not self._perform(actions, wfile):
                    return session
        except OSError as e:
            logger.warning("Lost connection from %s: %s", session.sender_id, e)
        # a token redeemed without an accepted message goes back
        session, _ = receiver_fsm_step(session, ConnectionClosed(), self)
        return session

    @classmethod
    def from_config(cls, config, config_path=None):
        catalog = load_catalog(resolve(config_path, config.catalog))
        scoring = None
        if config.scoring:
            scoring = load_scoring_config(resolve(config_path, config.scoring))
        payment = PaymentClient(config.payment) if config.payment else None
        identity = IdentityClient(config.identity) if config.identity else None
        alerts = None
        if config.alerts is not None:
            sink_config = config.alerts
            if sink_config.path:
                sink_config.path = resolve(config_path, sink_config.path)
            alerts = AlertDispatcher(sink_from_config(sink_config),
                                     attempts=sink_config.attempts)
        return cls(catalog, config.recipient_id,
                   credential=config.credential,
                   payment=payment,
                   identity=identity,
                   scoring=scoring,
                   alerts=alerts,
                   data_dir=resolve(config_path, config.data_dir))


class ReceiverServer(ServiceServer):

    name = 'receiver'

    def __init__(self, address, service):
        ServiceServer.__init__(self, address)
        self.service = service

    def handle_connection(self, rfile, wfile):
        self.service.handle_connection(rfile, wfile)


class ReceiverClient(object):
    """
    Retrieval and status queries against a receiver daemon.
    """

    def __init__(self, address, timeout=DEFAULT_TIMEOUT):
        self.address = address
        self.timeout = timeout

    def _exchange(self, frame, until):
        """
        Send ``frame`` and read replies until one is an ``until``.
        """
        replies = []
        with socket.create_connection(self.address.as_tuple(),
                                      timeout=self.timeout) as sock:
            with sock.makefile('rb') as rfile, sock.makefile('wb') as wfile:
                wfile.write(encode_frame(frame))
                wfile.flush()
                reader = FrameReader(rfile)
                while True:
                    reply = reader.read_frame()
                    if reply is None:
                        raise ProtocolViolation("Receiver closed the connection")
                    if isinstance(reply, Rejected):
                        wfile.write(encode_frame(Quit()))
                        raise _rejection(reply)
                    replies.append(reply)
                    if isinstance(reply, until):
                        break
                wfile.write(encode_frame(Quit()))
        return replies

    def fetch(self, cos_id, recipient_id, credential, max_n):
        """
        :return: The retrieved :class:`~.MessageFrame` objects, oldest
            first.
        """
        replies = self._exchange(Fetch(cos_id, recipient_id, credential, max_n),
                                 End)
        messages = [r for r in replies if isinstance(r, MessageFrame)]
        if len(messages) != replies[-1].count:
            raise ProtocolViolation("END count differs from the messages sent")
        return messages

    def status(self, message_id):
        reply, = self._exchange(Status(message_id, STATUS_QUERY), Status)
        return reply.state


def _rejection(frame):
    try:
        factory = ERRORS_BY_NAME[frame.reason]
    except KeyError:
        return GridEmailError(frame.reason, frame.code)
    return factory(frame.reason)
