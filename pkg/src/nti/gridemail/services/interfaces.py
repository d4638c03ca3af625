#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=inherit-non-class,no-self-argument,no-method-argument

from zope import interface

from zope.interface.interfaces import ObjectEvent
from zope.interface.interfaces import IObjectEvent

from zope.schema import Real
from zope.schema import Bool
from zope.schema import Choice

from nti.property.property import alias

from nti.schema.field import Int
from nti.schema.field import Dict
from nti.schema.field import Object
from nti.schema.field import TextLine
from nti.schema.field import ListOrTuple
from nti.schema.field import ValidTextLine

from nti.gridemail.interfaces import IMessage
from nti.gridemail.interfaces import GridEmailError

#: Queue entry delivery states
QUEUED = u'queued'
DELIVERED = u'delivered'
DELIVERY_STATES = (QUEUED, DELIVERED)

#: Token states
ISSUED = u'issued'
REDEEMED = u'redeemed'
REFUNDED = u'refunded'
TOKEN_STATES = (ISSUED, REDEEMED, REFUNDED)

#: Alert sink kinds
LOG_SINK = u'log'
UDP_SINK = u'udp'
SINK_KINDS = (LOG_SINK, UDP_SINK)

#: Retry defaults of the sender service
DEFAULT_ATTEMPTS = 3
DEFAULT_BACKOFF_SECONDS = 1.0
DEFAULT_RETRY_CODES = (507,)


class QueueFull(GridEmailError):
    code = 507


class DuplicateMessage(GridEmailError):
    code = 409


class AuthFailed(GridEmailError):
    code = 401


class NotFound(GridEmailError):
    code = 404


class PaymentError(GridEmailError):
    code = 402


class DuplicateToken(PaymentError):
    code = 409


class InvalidAmount(PaymentError):
    code = 402


class InvalidRefund(PaymentError):
    code = 409


class IdentityError(GridEmailError):
    code = 401


#: Error classes by the name line protocol replies carry
ERRORS_BY_NAME = {cls.__name__: cls for cls in (QueueFull, AuthFailed,
                                                NotFound, PaymentError,
                                                DuplicateMessage,
                                                DuplicateToken, InvalidAmount,
                                                InvalidRefund, IdentityError)}


class IQueueEntry(interface.Interface):

    receipt_id = Int(title=u"Receipt, increasing within a queue", min=1,
                     required=True)

    cos_id = ValidTextLine(title=u"Class of service", required=True)

    message = Object(IMessage, title=u"The message", required=True)

    enqueued_at = Real(title=u"Enqueue time, seconds since the epoch",
                       required=True)

    state = Choice(title=u"Delivery state", values=DELIVERY_STATES,
                   required=True, default=QUEUED)


class IQueueStore(interface.Interface):
    """
    Per class of service FIFO queues of accepted messages.
    """

    def enqueue(cos_id, message):
        """
        Append ``message``; returns the receipt id once it is durable.
        """

    def fetch(cos_id, recipient_id, credential, max_n):
        """
        Up to ``max_n`` oldest queued messages, marked delivered.
        """

    def length(cos_id):
        """
        The number of queued (undelivered) messages.
        """


class ITokenRecord(interface.Interface):

    token = ValidTextLine(title=u"The token", required=True)

    amount = Real(title=u"Value", min=0.0, required=True)

    payer = ValidTextLine(title=u"Who paid", required=True)

    payee = TextLine(title=u"Who redeemed it", required=False)

    state = Choice(title=u"Token state", values=TOKEN_STATES,
                   required=True, default=ISSUED)


class IAlertRecord(interface.Interface):

    message_id = ValidTextLine(title=u"The alerted message", required=True)

    cos_id = ValidTextLine(title=u"Its class of service", required=True)

    timestamp = Real(title=u"Dispatch time", required=True)


class IAlertSink(interface.Interface):

    def deliver(record):
        """
        Hand ``record`` to the destination; raise on failure.
        """


class IAddress(interface.Interface):

    host = TextLine(title=u"Host", required=True, default=u'127.0.0.1')

    port = Int(title=u"Port", min=0, max=65535, required=True)


class IAlertSinkConfig(interface.Interface):

    kind = Choice(title=u"Destination kind", values=SINK_KINDS,
                  required=True, default=LOG_SINK)

    path = TextLine(title=u"Log file of a log sink", required=False)

    address = Object(IAddress, title=u"Endpoint of a UDP sink",
                     required=False)

    attempts = Int(title=u"Delivery attempts", min=1, required=True,
                   default=DEFAULT_ATTEMPTS)

    @interface.invariant
    def destination(cfg):
        if cfg.kind == LOG_SINK and not cfg.path:
            raise interface.Invalid("A log sink needs a path")
        if cfg.kind == UDP_SINK and cfg.address is None:
            raise interface.Invalid("A UDP sink needs an address")


class IRetryPolicy(interface.Interface):

    attempts = Int(title=u"Attempts per message", min=1, required=True,
                   default=DEFAULT_ATTEMPTS)

    backoff_s = Real(title=u"First delay; doubled after each attempt",
                     min=0.0, required=True, default=DEFAULT_BACKOFF_SECONDS)

    retry_codes = ListOrTuple(Int(title=u"code"),
                              title=u"Rejection codes worth retrying",
                              required=False, default=DEFAULT_RETRY_CODES)


class IReceiverConfig(interface.Interface):

    listen = Object(IAddress, title=u"Listen address", required=True)

    catalog = TextLine(title=u"Catalog document path", required=True)

    data_dir = TextLine(title=u"Queue directory", required=False)

    recipient_id = ValidTextLine(title=u"The recipient served",
                                 required=True)

    credential = ValidTextLine(title=u"The recipient's retrieval credential",
                               min_length=1, required=True)

    payment = Object(IAddress, title=u"Payment service", required=False)

    identity = Object(IAddress, title=u"Identity service", required=False)

    scoring = TextLine(title=u"Scoring config path", required=False)

    alerts = Object(IAlertSinkConfig, title=u"Alert sink", required=False)


class ISenderConfig(interface.Interface):

    listen = Object(IAddress, title=u"Listen address", required=True)

    payment = Object(IAddress, title=u"Payment service", required=True)

    retry = Object(IRetryPolicy, title=u"Retry policy", required=False)


class IPaymentConfig(interface.Interface):

    listen = Object(IAddress, title=u"Listen address", required=True)

    data_dir = TextLine(title=u"Ledger directory", required=False)


class IIdentityConfig(interface.Interface):

    listen = Object(IAddress, title=u"Listen address", required=True)

    secrets = Dict(title=u"Shared secret by sender id",
                   key_type=TextLine(title=u"sender id"),
                   value_type=TextLine(title=u"secret", min_length=1),
                   required=True)


class IClientConfig(interface.Interface):
    """
    What ``send`` and ``fetch`` connect to.
    """

    receiver = Object(IAddress, title=u"Receiver service", required=False)

    sender = Object(IAddress, title=u"Sender service", required=False)

    payment = Object(IAddress, title=u"Payment service", required=False)

    retry = Object(IRetryPolicy, title=u"Retry policy", required=False)


class ITokenEvent(IObjectEvent):
    """
    A token changed state.
    """

    state = Choice(title=u"The new state", values=TOKEN_STATES)


@interface.implementer(ITokenEvent)
class TokenEvent(ObjectEvent):

    record = alias('object')

    def __init__(self, record, state):
        super(TokenEvent, self).__init__(record)
        self.state = state


class IAlertDispatchedEvent(IObjectEvent):
    """
    An alert reached its sink.
    """

    delivered = Bool(title=u"Whether the sink accepted it")


@interface.implementer(IAlertDispatchedEvent)
class AlertDispatchedEvent(ObjectEvent):

    record = alias('object')

    def __init__(self, record, delivered=True):
        super(AlertDispatchedEvent, self).__init__(record)
        self.delivered = delivered
