#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Core gridemail value objects.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import hashlib

from zope import interface

from zope.cachedescriptors.property import Lazy

from nti.externalization.externalization import to_external_object
from nti.externalization.externalization import to_standard_external_dictionary

from nti.externalization.representation import WithRepr

from nti.gridemail import MetaGridEmailObject

from nti.gridemail.interfaces import NEITHER
from nti.gridemail.interfaces import TRUSTED_ONLY
from nti.gridemail.interfaces import AUTHENTICATED
from nti.gridemail.interfaces import GRID_REGIONS

from nti.gridemail.interfaces import IMessage
from nti.gridemail.interfaces import IMessageMeta
from nti.gridemail.interfaces import IBenefitPoint
from nti.gridemail.interfaces import IQosDescriptor
from nti.gridemail.interfaces import ISenderProfile
from nti.gridemail.interfaces import IScoringConfig
from nti.gridemail.interfaces import IAdmissionScore
from nti.gridemail.interfaces import IClassOfService

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.policies.interfaces import IPricingPolicyConfig

from nti.property.property import alias

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


def compute_digest(body):
    return hashlib.sha256(body).hexdigest()


class _ExternalizableMixin(object):
    """
    Externalizes the schema fields of ``_ext_iface``.
    """

    _ext_iface = None

    def toExternalObject(self, **unused_kwargs):
        result = to_standard_external_dictionary(self)
        for name in self._ext_iface.names(all=True):
            field = self._ext_iface[name]
            if not hasattr(field, 'validate'):  # Attributes and methods
                continue
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, (set, frozenset)):
                value = sorted(value)
            result[name] = to_external_object(value)
        return result


@WithRepr
@EqHash('availability', 'accessibility', 'integrity', 'latency_s',
        'reliability', 'flexibility', 'security', 'recipient_properties')
@interface.implementer(IQosDescriptor)
class QosDescriptor(_ExternalizableMixin, SchemaConfigured,
                    metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IQosDescriptor)

    _ext_iface = IQosDescriptor

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        IQosDescriptor.validateInvariants(self)


@WithRepr
@EqHash('budget', 'max_latency_s', 'required_qos', 'declared_benefit')
@interface.implementer(ISenderProfile)
class SenderProfile(_ExternalizableMixin, SchemaConfigured,
                    metaclass=MetaGridEmailObject):
    createDirectFieldProperties(ISenderProfile)

    _ext_iface = ISenderProfile


@WithRepr
@EqHash('id', 'sender_id', 'recipient_id', 'size_bytes', 'format_tag',
        'stamp', 'payment', 'cos_id', 'digest', 'authenticator')
@interface.implementer(IMessageMeta)
class MessageMeta(_ExternalizableMixin, SchemaConfigured,
                  metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IMessageMeta)

    _ext_iface = IMessageMeta

    message_id = alias('id')


@EqHash('id', 'sender_id', 'recipient_id', 'format_tag', 'body',
        'stamp', 'payment', 'cos_id')
@interface.implementer(IMessage)
class Message(SchemaConfigured,
              metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IMessageMeta)
    createDirectFieldProperties(IMessage)

    message_id = alias('id')

    def __init__(self, **kwargs):
        body = kwargs.get('body', b'')
        kwargs.setdefault('size_bytes', len(body))
        if kwargs['size_bytes'] != len(body):
            raise ValueError("size_bytes must equal the body length")
        SchemaConfigured.__init__(self, **kwargs)

    @Lazy
    def body_digest(self):
        return compute_digest(self.body)

    def meta(self):
        """
        The :class:`MessageMeta` view of this message. The digest is
        always recomputed from the body.
        """
        return MessageMeta(id=self.id,
                           sender_id=self.sender_id,
                           recipient_id=self.recipient_id,
                           size_bytes=self.size_bytes,
                           format_tag=self.format_tag,
                           stamp=self.stamp,
                           payment=self.payment,
                           cos_id=self.cos_id,
                           digest=self.body_digest,
                           authenticator=self.authenticator)

    def __repr__(self):
        return '<%s %r from %r (%s bytes)>' % (type(self).__name__, self.id,
                                               self.sender_id, self.size_bytes)


@WithRepr
@EqHash('cos_id', 'qos', 'pricing', 'trusted_senders', 'capacity', 'alert')
@interface.implementer(IClassOfService)
class ClassOfService(_ExternalizableMixin, SchemaConfigured,
                     metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IClassOfService)

    _ext_iface = IClassOfService

    pricing = None

    def __init__(self, pricing=None, **kwargs):
        SchemaConfigured.__init__(self, **kwargs)
        if pricing is None:
            pricing = PricingPolicyConfig()
        if not IPricingPolicyConfig.providedBy(pricing):
            raise TypeError("pricing must provide IPricingPolicyConfig")
        self.pricing = pricing

    @property
    def trusted_only(self):
        return self.qos.accessibility == TRUSTED_ONLY

    @property
    def requires_authentication(self):
        return self.qos.security == AUTHENTICATED

    def toExternalObject(self, **unused_kwargs):
        result = super(ClassOfService, self).toExternalObject()
        result['pricing'] = to_external_object(self.pricing)
        return result


@WithRepr
@interface.implementer(IScoringConfig)
class ScoringConfig(_ExternalizableMixin, SchemaConfigured,
                    metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IScoringConfig)

    _ext_iface = IScoringConfig

    def category(self, sender_id):
        return (self.category_of or {}).get(sender_id)

    def stamp_is_valid(self, stamp):
        return bool(stamp) and stamp in (self.reply_stamps or ())


@WithRepr
@EqHash('total', 'components')
@interface.implementer(IAdmissionScore)
class AdmissionScore(SchemaConfigured):
    createDirectFieldProperties(IAdmissionScore)


@WithRepr
@EqHash('sender_benefit', 'receiver_benefit')
@interface.implementer(IBenefitPoint)
class BenefitPoint(SchemaConfigured):
    createDirectFieldProperties(IBenefitPoint)

    def __init__(self, sender_benefit, receiver_benefit):
        SchemaConfigured.__init__(self,
                                  sender_benefit=sender_benefit,
                                  receiver_benefit=receiver_benefit)


class GridRegion(str):
    """
    One of the four regions of the benefit grid.
    """

    def __new__(cls, region):
        if region not in GRID_REGIONS:
            raise ValueError("Unknown grid region %r" % (region,))
        return str.__new__(cls, region)

    region = property(str.__str__)

    @property
    def is_neither(self):
        return self == NEITHER
