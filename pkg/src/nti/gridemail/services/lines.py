#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The single-line request/reply protocols of the payment and identity
services, with their TCP servers and clients.

Requests and replies are UTF-8 lines ending in CRLF::

    ISSUE payer amount            -> OK token
    VERIFY token amount payee     -> OK amount
    REFUND token                  -> OK
    CHECK sender digest mac       -> OK

Failures answer ``ERR code Name``, where ``Name`` is the error class.
A missing authenticator is sent as ``-``.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import socket

from zope import interface

from nti.gridemail.interfaces import GridEmailError

from nti.gridemail.protocol.codec import CRLF
from nti.gridemail.protocol.codec import MAX_LINE

from nti.gridemail.protocol.frames import check_token
from nti.gridemail.protocol.frames import format_price

from nti.gridemail.protocol.interfaces import IPaymentService
from nti.gridemail.protocol.interfaces import IIdentityService

from nti.gridemail.protocol.interfaces import ProtocolViolation

from nti.gridemail.services.interfaces import ERRORS_BY_NAME

from nti.gridemail.services.interfaces import PaymentError
from nti.gridemail.services.interfaces import IdentityError

from nti.gridemail.services.server import ServiceServer

#: Placeholder for an absent argument
MISSING = u'-'

#: Seconds a client waits on a service
DEFAULT_TIMEOUT = 10.0

logger = __import__('logging').getLogger(__name__)


def _words(line, arity):
    words = line.split(' ')
    if len(words) != arity + 1 or not all(words):
        raise ProtocolViolation("%s takes %d arguments" % (words[0], arity))
    return words[1:]


def _amount(value):
    try:
        return float(value)
    except ValueError:
        raise ProtocolViolation("Bad amount %r" % value)


def _payment_issue(ledger, line):
    payer, amount = _words(line, 2)
    return ledger.issue_token(payer, _amount(amount))


def _payment_verify(ledger, line):
    token, amount, payee = _words(line, 3)
    return format_price(ledger.verify_and_redeem(token, _amount(amount), payee))


def _payment_refund(ledger, line):
    token, = _words(line, 1)
    ledger.refund(token)


def _identity_check(registry, line):
    sender_id, digest, mac = _words(line, 3)
    registry.check_identity(sender_id, digest, u'' if mac == MISSING else mac)


PAYMENT_COMMANDS = {
    'ISSUE': _payment_issue,
    'VERIFY': _payment_verify,
    'REFUND': _payment_refund,
}

IDENTITY_COMMANDS = {
    'CHECK': _identity_check,
}


def answer(commands, service, line):
    """
    The reply line, without terminator, to the request ``line``.
    """
    verb = line.partition(' ')[0]
    try:
        command = commands[verb]
    except KeyError:
        return u'ERR %d %s' % (ProtocolViolation.code, ProtocolViolation.__name__)
    try:
        result = command(service, line)
    except GridEmailError as e:
        logger.warning("%s failed: %s", verb, e)
        return u'ERR %d %s' % (e.code, type(e).__name__)
    return u'OK' if result is None else u'OK %s' % result


class LineServer(ServiceServer):

    def __init__(self, address, service, commands):
        ServiceServer.__init__(self, address)
        self.service = service
        self.commands = commands

    def handle_connection(self, rfile, wfile):
        while True:
            raw = rfile.readline(MAX_LINE + len(CRLF))
            if not raw:
                return
            try:
                if not raw.endswith(CRLF):
                    raise ProtocolViolation("Line is unterminated or too long")
                line = raw[:-len(CRLF)].decode('utf-8')
            except (ProtocolViolation, UnicodeDecodeError):
                wfile.write(b'ERR 550 ProtocolViolation' + CRLF)
                return
            reply = answer(self.commands, self.service, line)
            wfile.write(reply.encode('utf-8') + CRLF)
            wfile.flush()


class PaymentServer(LineServer):

    name = 'payment'

    def __init__(self, address, ledger):
        LineServer.__init__(self, address, ledger, PAYMENT_COMMANDS)


class IdentityServer(LineServer):

    name = 'identity'

    def __init__(self, address, registry):
        LineServer.__init__(self, address, registry, IDENTITY_COMMANDS)


def _error(code, name):
    try:
        factory = ERRORS_BY_NAME[name]
    except KeyError:
        return GridEmailError(name, int(code))
    return factory(name)


class LineClient(object):
    """
    One connection per request. Transport failures raise
    :attr:`unavailable`.
    """

    unavailable = GridEmailError

    def __init__(self, address, timeout=DEFAULT_TIMEOUT):
        self.address = address
        self.timeout = timeout

    def request(self, *words):
        for word in words:
            check_token(word, 'argument')
        line = u' '.join(words).encode('utf-8') + CRLF
        try:
            with socket.create_connection(self.address.as_tuple(),
                                          timeout=self.timeout) as sock:
                sock.sendall(line)
                with sock.makefile('rb') as rfile:
                    reply = rfile.readline(MAX_LINE + len(CRLF))
        except OSError as e:
            logger.warning("Service at %s unavailable: %s", self.address, e)
            raise self.unavailable("Service unavailable")
        if not reply.endswith(CRLF):
            raise ProtocolViolation("Service at %s closed the connection"
                                    % self.address)
        status, _, rest = reply[:-len(CRLF)].decode('utf-8').partition(' ')
        if status == u'OK':
            return rest
        code, _, name = rest.partition(' ')
        if status != u'ERR' or not code.isdigit():
            raise ProtocolViolation("Bad reply %r" % reply)
        raise _error(code, name)


@interface.implementer(IPaymentService)
class PaymentClient(LineClient):

    unavailable = PaymentError

    def issue_token(self, payer, amount):
        return self.request(u'ISSUE', payer, format_price(amount))

    def verify_and_redeem(self, token, required_amount, payee):
        return float(self.request(u'VERIFY', token,
                                  format_price(required_amount), payee))

    def refund(self, token):
        self.request(u'REFUND', token)


@interface.implementer(IIdentityService)
class IdentityClient(LineClient):

    unavailable = IdentityError

    def check_identity(self, sender_id, digest, authenticator):
        self.request(u'CHECK', sender_id, digest or MISSING,
                     authenticator or MISSING)
        return True
