#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The sender daemon: negotiates, pays for and delivers submitted
messages, retrying transient failures.

Submissions reach the daemon as::

    SUBMIT {"receiver": "host:port", "profile": {...}, "message": {...}}
    DATA n
    <n body bytes>

and are answered by ``RESULT outcome code`` (``-`` for no code).

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import time
import socket
import collections

import simplejson

from nti.gridemail.interfaces import GridEmailError

from nti.gridemail.internalization import ConfigurationError

from nti.gridemail.internalization import check_keys
from nti.gridemail.internalization import construct
from nti.gridemail.internalization import profile_from_external

from nti.gridemail.model import Message

from nti.gridemail.protocol.codec import CRLF
from nti.gridemail.protocol.codec import MAX_LINE

from nti.gridemail.protocol.codec import FrameReader

from nti.gridemail.protocol.codec import encode_frame

from nti.gridemail.protocol.frames import Data
from nti.gridemail.protocol.frames import Quit

from nti.gridemail.protocol.interfaces import FAILED
from nti.gridemail.protocol.interfaces import REJECTED
from nti.gridemail.protocol.interfaces import VIOLATION
from nti.gridemail.protocol.interfaces import PROTOCOL_VIOLATION

from nti.gridemail.protocol.interfaces import ProtocolViolation

from nti.gridemail.protocol.sender import sender_fsm_step

from nti.gridemail.protocol.session import Send
from nti.gridemail.protocol.session import Submit
from nti.gridemail.protocol.session import Feedback
from nti.gridemail.protocol.session import TokenFailed
from nti.gridemail.protocol.session import TokenIssued
from nti.gridemail.protocol.session import RequestToken
from nti.gridemail.protocol.session import SenderSession

from nti.gridemail.services.config import RetryPolicy

from nti.gridemail.services.config import parse_address

from nti.gridemail.services.lines import PaymentClient

from nti.gridemail.services.server import ServiceServer

#: Outcome reported when no receiver could be reached
CONNECTION_FAILED = u'ConnectionFailed'

#: Seconds to wait on a receiver
DEFAULT_TIMEOUT = 30.0

#: Message fields a submission may carry
SUBMITTED_FIELDS = ('id', 'sender_id', 'recipient_id', 'format_tag',
                    'stamp', 'authenticator')

logger = __import__('logging').getLogger(__name__)


class SenderService(object):
    """
    Delivers messages through receivers' sessions.

    :param payment: The :class:`~.IPaymentService` that issues tokens.
    :param retry: The :class:`~.RetryPolicy`.
    """

    def __init__(self, payment, retry=None, sleep=time.sleep,
                 timeout=DEFAULT_TIMEOUT):
        self.payment = payment
        self.retry = retry if retry is not None else RetryPolicy()
        self.sleep = sleep
        self.timeout = timeout

    def _request_token(self, session, action):
        try:
            token = self.payment.issue_token(session.sender_id, action.amount)
        except GridEmailError as e:
            logger.warning("No token for %s: %s", session.message.id, e)
            return sender_fsm_step(session, TokenFailed())
        return sender_fsm_step(session, TokenIssued(token))

    def run_session(self, session, rfile, wfile):
        """
        Drive ``session`` over an open connection.

        :return: The finished session; its ``feedback`` is the outcome.
        """
        reader = FrameReader(rfile)
        session, actions = sender_fsm_step(session, Submit())
        while True:
            pending = collections.deque(actions)
            while pending:
                action = pending.popleft()
                if isinstance(action, Send):
                    wfile.write(encode_frame(action.frame))
                elif isinstance(action, RequestToken):
                    wfile.flush()
                    session, more = self._request_token(session, action)
                    pending.extend(more)
            wfile.flush()
            if session.terminal:
                return session
            try:
                frame = reader.read_frame()
            except ProtocolViolation as e:
                logger.warning("Undecodable reply: %s", e)
                wfile.write(encode_frame(Quit()))
                wfile.flush()
                return session.replace(state=FAILED,
                                       feedback=Feedback(VIOLATION,
                                                         PROTOCOL_VIOLATION,
                                                         u'Undecodable'))
            if frame is None:
                raise ConnectionError("Receiver closed the connection")
            logger.debug("Received %s in %s", frame.verb, session.state)
            session, actions = sender_fsm_step(session, frame)

    def attempt(self, address, profile, message):
        session = SenderSession(profile, message)
        with socket.create_connection(address.as_tuple(),
                                      timeout=self.timeout) as sock:
            with sock.makefile('rb') as rfile, sock.makefile('wb') as wfile:
                session = self.run_session(session, rfile, wfile)
        return session.feedback

    def send(self, address, profile, message):
        """
        Deliver ``message`` to the receiver at ``address``.

        :return: The terminal :class:`~.Feedback`.
        :raises OSError: When every attempt failed to reach the receiver.
        """
        attempts = self.retry.attempts
        retry_codes = self.retry.retry_codes or ()
        for attempt in range(attempts):
            last = attempt + 1 == attempts
            try:
                feedback = self.attempt(address, profile, message)
            except OSError as e:
                if last:
                    raise
                logger.warning("Attempt %d for %s failed: %s",
                               attempt + 1, message.id, e)
            else:
                retry = feedback.outcome == REJECTED \
                    and feedback.code in retry_codes
                if not retry or last:
                    logger.info("Sent %s: %s %s", message.id,
                                feedback.outcome, feedback.code)
                    return feedback
                logger.warning("Attempt %d for %s rejected with %s",
                               attempt + 1, message.id, feedback.code)
            self.sleep(self.retry.delay(attempt))

    @classmethod
    def from_config(cls, config):
        return cls(PaymentClient(config.payment), retry=config.retry)


def parse_submission(envelope, body):
    """
    The receiver address, profile and message of a submission.
    """
    where = u'submission'
    ext = check_keys(envelope, ('receiver', 'profile', 'message'), where)
    if 'receiver' not in ext or 'message' not in ext:
        raise ConfigurationError("receiver and message are required", where)
    address = parse_address(ext['receiver'], where + ' receiver')
    profile = profile_from_external(ext.get('profile') or {})
    kwargs = check_keys(ext['message'], SUBMITTED_FIELDS, where + ' message')
    kwargs['body'] = body
    message = construct(Message, kwargs, where + ' message')
    return address, profile, message


def format_result(feedback):
    code = u'-' if feedback.code is None else str(feedback.code)
    return u'RESULT %s %s' % (feedback.outcome, code)


class SenderServer(ServiceServer):

    name = 'sender'

    def __init__(self, address, service):
        ServiceServer.__init__(self, address)
        self.service = service

    def _reply(self, wfile, text):
        wfile.write(text.encode('utf-8') + CRLF)
        wfile.flush()

    def _submission(self, rfile):
        line = rfile.readline(MAX_LINE + len(CRLF))
        if not line:
            return None
        verb, _, document = line.rstrip(CRLF).decode('utf-8').partition(' ')
        if verb != u'SUBMIT':
            raise ProtocolViolation("Expected SUBMIT")
        try:
            envelope = simplejson.loads(document)
        except ValueError:
            raise ProtocolViolation("SUBMIT carries a JSON document")
        frame = FrameReader(rfile).read_frame()
        if not isinstance(frame, Data):
            raise ProtocolViolation("Expected DATA")
        return envelope, frame.body

    def handle_connection(self, rfile, wfile):
        while True:
            try:
                submission = self._submission(rfile)
                if submission is None:
                    return
                address, profile, message = parse_submission(*submission)
            except (ProtocolViolation, ConfigurationError, ValueError) as e:
                logger.warning("Bad submission: %s", e)
                self._reply(wfile, u'RESULT %s %d' % (VIOLATION, PROTOCOL_VIOLATION))
                return
            try:
                feedback = self.service.send(address, profile, message)
            except OSError as e:
                logger.warning("Could not reach %s: %s", address, e)
                self._reply(wfile, u'RESULT %s -' % CONNECTION_FAILED)
                continue
            self._reply(wfile, format_result(feedback))


class SenderClient(object):
    """
    Submits messages to a sender daemon.
    """

    def __init__(self, address, timeout=DEFAULT_TIMEOUT * 4):
        self.address = address
        self.timeout = timeout

    def submit(self, receiver, profile_ext, message):
        """
        :return: ``(outcome, code)``; the code is None when absent.
        """
        message_ext = {name: getattr(message, name) for name in SUBMITTED_FIELDS
                       if getattr(message, name)}
        envelope = {'receiver': str(receiver),
                    'profile': profile_ext,
                    'message': message_ext}
        line = u'SUBMIT ' + simplejson.dumps(envelope, sort_keys=True,
                                             separators=(',', ':'))
        with socket.create_connection(self.address.as_tuple(),
                                      timeout=self.timeout) as sock:
            sock.sendall(line.encode('utf-8') + CRLF + encode_frame(Data(message.body)))
            with sock.makefile('rb') as rfile:
                reply = rfile.readline(MAX_LINE + len(CRLF))
        words = reply.rstrip(CRLF).decode('utf-8').split(' ')
        if len(words) != 3 or words[0] != u'RESULT':
            raise ProtocolViolation("Bad reply %r" % reply)
        code = None if words[2] == u'-' else int(words[2])
        return words[1], code
