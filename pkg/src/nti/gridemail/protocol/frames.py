#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Protocol frames.

Every frame is one CRLF-terminated line of single-space separated
arguments after an uppercase verb. Frames with a body (DATA, MESSAGE)
announce its length in decimal bytes on the line; the raw body follows.
QUERY carries a compact JSON document, and NOCOS a free text reason, as
the rest of the line.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import re

import simplejson

from nti.externalization.representation import WithRepr

from nti.gridemail.protocol.interfaces import STATUS_STATES
from nti.gridemail.protocol.interfaces import RESPONSE_CODES

from nti.gridemail.protocol.interfaces import ProtocolViolation

from nti.schema.eqhash import EqHash

AVAILABLE = u'AVAILABLE'
UNAVAILABLE = u'UNAVAILABLE'

_TOKEN = re.compile(r'^[\x21-\x7e]+$')

logger = __import__('logging').getLogger(__name__)


def check_token(value, name):
    if not isinstance(value, str) or not _TOKEN.match(value):
        raise ValueError("%s must be a printable token without spaces: %r"
                         % (name, value))
    return value


def _check_text(value, name):
    if not isinstance(value, str) or '\r' in value or '\n' in value:
        raise ValueError("%s must be a single line of text" % name)
    return value


def _int(value, name):
    if not re.match(r'^[0-9]+$', value):
        raise ProtocolViolation("%s must be a decimal integer" % name)
    return int(value)


def _float(value, name):
    try:
        result = float(value)
    except ValueError:
        raise ProtocolViolation("%s must be a number" % name)
    if result != result or result in (float('inf'), float('-inf')):
        raise ProtocolViolation("%s must be finite" % name)
    return result


def format_price(price):
    return repr(float(price))


class Frame(object):
    """
    Base of all frames. Subclasses name their ``verb``; :meth:`arguments`
    and :meth:`from_arguments` convert to and from the line's words.
    """

    verb = None

    #: Whether everything after the verb is one argument
    rest_of_line = False

    #: Whether a body of the announced length follows the line
    has_body = False

    body = None

    def arguments(self):
        return ()

    @classmethod
    def from_arguments(cls, args):
        if args:
            raise ProtocolViolation("%s takes no arguments" % cls.verb)
        return cls()

    @classmethod
    def _arity(cls, args, count):
        if len(args) != count:
            raise ProtocolViolation("%s takes %d arguments, got %d"
                                    % (cls.verb, count, len(args)))


@WithRepr
@EqHash('sender_id')
class Hello(Frame):
    verb = 'HELLO'

    def __init__(self, sender_id):
        self.sender_id = check_token(sender_id, 'sender_id')

    def arguments(self):
        return (self.sender_id,)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 1)
        return cls(args[0])


@WithRepr
@EqHash('document')
class Query(Frame):
    """
    The sender's profile and the message metadata:
    ``{"profile": {...}, "message": {...}}``.
    """
    verb = 'QUERY'
    rest_of_line = True

    def __init__(self, document):
        if not isinstance(document, dict):
            raise ValueError("QUERY carries a JSON object")
        self.document = document

    @property
    def profile(self):
        return self.document.get('profile')

    @property
    def message(self):
        return self.document.get('message')

    def arguments(self):
        return (simplejson.dumps(self.document, separators=(',', ':'),
                                 sort_keys=True),)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 1)
        try:
            document = simplejson.loads(args[0])
        except ValueError:
            raise ProtocolViolation("QUERY document is not JSON")
        if not isinstance(document, dict):
            raise ProtocolViolation("QUERY document is not an object")
        return cls(document)


@WithRepr
@EqHash('cos_id', 'price', 'available')
class Quote(Frame):
    verb = 'QUOTE'

    def __init__(self, cos_id, price, available=True):
        self.cos_id = check_token(cos_id, 'cos_id')
        self.price = float(price)
        if not 0 <= self.price < float('inf'):
            raise ValueError("price must be finite and nonnegative")
        self.available = bool(available)

    def arguments(self):
        return (self.cos_id, format_price(self.price),
                AVAILABLE if self.available else UNAVAILABLE)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 3)
        if args[2] not in (AVAILABLE, UNAVAILABLE):
            raise ProtocolViolation("Bad availability flag")
        price = _float(args[1], 'price')
        if price < 0:
            raise ProtocolViolation("price must be nonnegative")
        return cls(args[0], price, args[2] == AVAILABLE)


@WithRepr
@EqHash('reason')
class NoCos(Frame):
    verb = 'NOCOS'
    rest_of_line = True

    def __init__(self, reason):
        self.reason = _check_text(reason, 'reason').strip() or u'NoMatch'

    def arguments(self):
        return (self.reason,)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 1)
        return cls(args[0])


@WithRepr
@EqHash('token')
class Pay(Frame):
    verb = 'PAY'

    def __init__(self, token):
        self.token = check_token(token, 'token')

    def arguments(self):
        return (self.token,)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 1)
        return cls(args[0])


@EqHash('body')
class Data(Frame):
    verb = 'DATA'
    has_body = True

    def __init__(self, body):
        if not isinstance(body, bytes):
            raise ValueError("DATA carries bytes")
        self.body = body

    @property
    def length(self):
        return len(self.body)

    def arguments(self):
        return (str(self.length),)

    @classmethod
    def body_length(cls, args):
        cls._arity(args, 1)
        return _int(args[0], 'length')

    @classmethod
    def from_arguments(cls, args, body=b''):
        return cls(body)

    def __repr__(self):
        return '<Data %d bytes>' % self.length


@WithRepr
@EqHash('message_id')
class Accepted(Frame):
    verb = 'ACCEPTED'

    def __init__(self, message_id):
        self.message_id = check_token(message_id, 'message_id')

    def arguments(self):
        return (self.message_id,)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 1)
        return cls(args[0])


@WithRepr
@EqHash('code', 'reason', 'price')
class Rejected(Frame):
    """
    ``REJECTED code reason [price]``; a payment rejection may name the
    price the receiver requires.
    """
    verb = 'REJECTED'

    def __init__(self, code, reason, price=None):
        if code not in RESPONSE_CODES or code < 400:
            raise ValueError("Unregistered rejection code %r" % (code,))
        self.code = code
        self.reason = check_token(reason, 'reason')
        self.price = None if price is None else float(price)

    def arguments(self):
        result = (str(self.code), self.reason)
        if self.price is not None:
            result += (format_price(self.price),)
        return result

    @classmethod
    def from_arguments(cls, args):
        if len(args) not in (2, 3):
            raise ProtocolViolation("REJECTED takes 2 or 3 arguments")
        code = _int(args[0], 'code')
        if code not in RESPONSE_CODES or code < 400:
            raise ProtocolViolation("Unregistered rejection code %s" % code)
        price = _float(args[2], 'price') if len(args) == 3 else None
        return cls(code, args[1], price)


@WithRepr
@EqHash('message_id', 'state')
class Status(Frame):
    verb = 'STATUS'

    def __init__(self, message_id, state):
        self.message_id = check_token(message_id, 'message_id')
        if state not in STATUS_STATES:
            raise ValueError("Unknown status %r" % (state,))
        self.state = state

    def arguments(self):
        return (self.message_id, self.state)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 2)
        if args[1] not in STATUS_STATES:
            raise ProtocolViolation("Unknown status %s" % args[1])
        return cls(args[0], args[1])


class Quit(Frame):
    verb = 'QUIT'

    def __eq__(self, other):
        return isinstance(other, Quit)

    def __hash__(self):
        return hash(self.verb)

    def __repr__(self):
        return '<Quit>'


@WithRepr
@EqHash('cos_id', 'recipient_id', 'credential', 'max_n')
class Fetch(Frame):
    verb = 'FETCH'

    def __init__(self, cos_id, recipient_id, credential, max_n):
        self.cos_id = check_token(cos_id, 'cos_id')
        self.recipient_id = check_token(recipient_id, 'recipient_id')
        self.credential = check_token(credential, 'credential')
        if int(max_n) < 0:
            raise ValueError("max_n must be nonnegative")
        self.max_n = int(max_n)

    def arguments(self):
        return (self.cos_id, self.recipient_id, self.credential,
                str(self.max_n))

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 4)
        return cls(args[0], args[1], args[2], _int(args[3], 'max_n'))


@EqHash('message_id', 'sender_id', 'format_tag', 'body')
class MessageFrame(Frame):
    """
    One retrieved message: ``MESSAGE id sender_id format_tag length``
    followed by the body.
    """
    verb = 'MESSAGE'
    has_body = True

    def __init__(self, message_id, sender_id, format_tag, body):
        self.message_id = check_token(message_id, 'message_id')
        self.sender_id = check_token(sender_id, 'sender_id')
        self.format_tag = check_token(format_tag, 'format_tag')
        if not isinstance(body, bytes):
            raise ValueError("MESSAGE carries bytes")
        self.body = body

    def arguments(self):
        return (self.message_id, self.sender_id, self.format_tag,
                str(len(self.body)))

    @classmethod
    def body_length(cls, args):
        cls._arity(args, 4)
        return _int(args[3], 'length')

    @classmethod
    def from_arguments(cls, args, body=b''):
        return cls(args[0], args[1], args[2], body)

    def __repr__(self):
        return '<MessageFrame %s from %s (%d bytes)>' % (self.message_id,
                                                         self.sender_id,
                                                         len(self.body))


@WithRepr
@EqHash('count')
class End(Frame):
    verb = 'END'

    def __init__(self, count):
        if int(count) < 0:
            raise ValueError("count must be nonnegative")
        self.count = int(count)

    def arguments(self):
        return (str(self.count),)

    @classmethod
    def from_arguments(cls, args):
        cls._arity(args, 1)
        return cls(_int(args[0], 'count'))


FRAME_TYPES = {
    cls.verb: cls for cls in (Hello, Query, Quote, NoCos, Pay, Data,
                              Accepted, Rejected, Status, Quit, Fetch,
                              MessageFrame, End)
}
