#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Domain interfaces shared by every gridemail component.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=inherit-non-class,no-self-argument,no-method-argument

import math

from zope import interface

from zope.interface.interfaces import ObjectEvent
from zope.interface.interfaces import IObjectEvent

from zope.schema import Real
from zope.schema import Bool
from zope.schema import Bytes
from zope.schema import Choice
from zope.schema import FrozenSet

from nti.property.property import alias

from nti.schema.field import Int
from nti.schema.field import Dict
from nti.schema.field import Object
from nti.schema.field import TextLine
from nti.schema.field import ValidTextLine


def finite(value):
    return value is None or math.isfinite(value)


#: Access rule values of a class of service
OPEN = u'open'
TRUSTED_ONLY = u'trusted_only'
ACCESSIBILITY_VOCABULARY = (OPEN, TRUSTED_ONLY)

#: Security rule values of a class of service
NO_SECURITY = u'none'
AUTHENTICATED = u'authenticated'
SECURITY_VOCABULARY = (NO_SECURITY, AUTHENTICATED)

#: Regions of the sender/receiver benefit grid
RECEIVER_ONLY = u'ReceiverOnly'
SENDER_ONLY = u'SenderOnly'
MUTUAL = u'Mutual'
NEITHER = u'Neither'
GRID_REGIONS = (RECEIVER_ONLY, SENDER_ONLY, MUTUAL, NEITHER)

#: Canonical class of service names
TRUSTED_COS = u'cos1'
FIXED_PRICE_COS = u'cos2'
CONGESTION_COS = u'cos3'

#: Sender categories understood by the default scoring config
FRIEND = u'friend'
PARTNER = u'partner'
UNKNOWN = u'unknown'


class IQosDescriptor(interface.Interface):
    """
    The quality of service a class of service delivers. When used as the
    requirement of a sender profile, unset (``None``) fields impose no
    constraint.
    """

    availability = Real(title=u"Fraction of time the class accepts messages",
                        min=0.0, max=1.0, required=False,
                        constraint=finite)

    accessibility = Choice(title=u"Who may use the class",
                           values=ACCESSIBILITY_VOCABULARY,
                           required=False)

    integrity = Bool(title=u"Whether delivered content is integrity checked",
                     required=False)

    latency_s = Real(title=u"Latency of delivery and processing, in seconds",
                     min=0.0, required=False, constraint=finite)

    reliability = Real(title=u"Fraction of messages delivered",
                       min=0.0, max=1.0, required=False,
                       constraint=finite)

    flexibility = FrozenSet(title=u"Accepted format tags",
                            value_type=TextLine(title=u"format tag"),
                            required=False)

    security = Choice(title=u"Sender authentication requirement",
                      values=SECURITY_VOCABULARY,
                      required=False)

    recipient_properties = FrozenSet(title=u"Topic tags of the recipient",
                                     value_type=TextLine(title=u"topic"),
                                     required=False)

    @interface.invariant
    def positive_latency(qos):
        if qos.latency_s is not None and qos.latency_s <= 0:
            raise interface.Invalid("latency_s must be positive")


class ISenderProfile(interface.Interface):
    """
    What a sender is prepared to invest in delivering one message.
    """

    budget = Real(title=u"Money the sender is willing to invest",
                  min=0.0, required=True, default=0.0,
                  constraint=finite)

    max_latency_s = Real(title=u"Largest acceptable latency; None for unbounded",
                         min=0.0, required=False, constraint=finite)

    required_qos = Object(IQosDescriptor,
                          title=u"The partial QoS requirement",
                          required=False)

    declared_benefit = Real(title=u"The sender's own valuation; advisory only",
                            required=False, constraint=finite)


class IMessageMeta(interface.Interface):
    """
    The features of a message an admission policy may see.
    """

    id = ValidTextLine(title=u"Message id", min_length=1, required=True)

    sender_id = ValidTextLine(title=u"Sender id", min_length=1, required=True)

    recipient_id = ValidTextLine(title=u"Recipient id", required=False,
                                 default=u'')

    size_bytes = Int(title=u"Body size", min=0, required=True, default=0)

    format_tag = ValidTextLine(title=u"Format tag", required=True,
                               default=u'plain')

    stamp = TextLine(title=u"Reply-paid stamp", required=False)

    payment = TextLine(title=u"Payment token", required=False)

    cos_id = TextLine(title=u"Negotiated class of service", required=False)

    digest = TextLine(title=u"Hex SHA-256 digest of the body", required=False)

    authenticator = TextLine(title=u"Keyed MAC of the digest", required=False)


class IMessage(IMessageMeta):
    """
    A message: content plus the features policies see.
    """

    body = Bytes(title=u"The body", required=True, default=b'')


class IClassOfService(interface.Interface):
    """
    A named queue with a QoS descriptor, pricing policy and access rules.
    """

    cos_id = ValidTextLine(title=u"Class id", min_length=1, required=True)

    qos = Object(IQosDescriptor, title=u"Delivered quality of service",
                 required=True)

    pricing = interface.Attribute("The class's pricing policy configuration")

    trusted_senders = FrozenSet(title=u"Sender ids allowed on a trusted-only class",
                                value_type=TextLine(title=u"sender id"),
                                required=False,
                                default=frozenset())

    capacity = Int(title=u"Queue capacity", min=1, required=True, default=100)

    alert = Bool(title=u"Whether accepted messages raise an alert",
                 required=False, default=False)


class IScoringConfig(interface.Interface):
    """
    Point tables for the additive admission score.
    """

    source_points = Dict(title=u"Points per sender category",
                         key_type=TextLine(title=u"category"),
                         value_type=Real(title=u"points", constraint=finite),
                         required=False)

    stamp_points = Real(title=u"Points for a valid reply-paid stamp",
                        required=False, default=0.0, constraint=finite)

    format_points = Dict(title=u"Points per format tag",
                         key_type=TextLine(title=u"format tag"),
                         value_type=Real(title=u"points", constraint=finite),
                         required=False)

    category_of = Dict(title=u"Sender category by sender id",
                       key_type=TextLine(title=u"sender id"),
                       value_type=TextLine(title=u"category"),
                       required=False)

    reply_stamps = FrozenSet(title=u"Stamps the recipient issued",
                             value_type=TextLine(title=u"stamp"),
                             required=False,
                             default=frozenset())


class IAdmissionScore(interface.Interface):

    total = Real(title=u"Total points", required=True, default=0.0)

    components = Dict(title=u"Points per rule",
                      key_type=TextLine(title=u"rule"),
                      value_type=Real(title=u"points"),
                      required=False)


class IBenefitPoint(interface.Interface):

    sender_benefit = Real(title=u"Benefit to the sender, in benefit units",
                          required=True, constraint=finite)

    receiver_benefit = Real(title=u"Benefit to the receiver, in benefit units",
                            required=True, constraint=finite)


class GridEmailError(Exception):
    """
    Base of the errors that map to a wire response code.
    """

    code = 550

    def __init__(self, message=u'', code=None):
        super(GridEmailError, self).__init__(message)
        if code is not None:
            self.code = code

    reason = property(lambda self: str(self))


class IMessageAcceptedEvent(IObjectEvent):
    """
    Sent after a receiver durably queued a message.
    """

    cos_id = ValidTextLine(title=u"The class the message was queued in")

    receipt_id = Int(title=u"The queue receipt")


@interface.implementer(IMessageAcceptedEvent)
class MessageAcceptedEvent(ObjectEvent):

    message = alias('object')

    def __init__(self, message, cos_id, receipt_id):
        super(MessageAcceptedEvent, self).__init__(message)
        self.cos_id = cos_id
        self.receipt_id = receipt_id


class IMessageRejectedEvent(IObjectEvent):
    """
    Sent when a receiver rejects an offered message.
    """

    code = Int(title=u"The response code")


@interface.implementer(IMessageRejectedEvent)
class MessageRejectedEvent(ObjectEvent):

    message = alias('object')

    def __init__(self, message, code, reason=u''):
        super(MessageRejectedEvent, self).__init__(message)
        self.code = code
        self.reason = reason


class IAuditTrail(interface.Interface):
    """
    A bounded record of what the daemons of this process did.
    """

    def record(kind, **details):
        """
        Append an entry of ``kind`` with ``details``.
        """

    def entries(kind=None):
        """
        The retained entries, oldest first, optionally of one kind.
        """
