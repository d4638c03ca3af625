#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Class of service catalogs.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from collections import OrderedDict

from nti.externalization.externalization import to_external_object

from nti.gridemail.interfaces import OPEN
from nti.gridemail.interfaces import TRUSTED_COS
from nti.gridemail.interfaces import NO_SECURITY
from nti.gridemail.interfaces import TRUSTED_ONLY
from nti.gridemail.interfaces import AUTHENTICATED
from nti.gridemail.interfaces import CONGESTION_COS
from nti.gridemail.interfaces import FIXED_PRICE_COS

from nti.gridemail.model import QosDescriptor
from nti.gridemail.model import ClassOfService

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.policies.interfaces import ACCEPT_ALL
from nti.gridemail.policies.interfaces import FIXED_PRICE
from nti.gridemail.policies.interfaces import CONGESTION_PRICE

DEFAULT_FORMATS = frozenset((u'plain', u'html', u'ical'))

logger = __import__('logging').getLogger(__name__)


class Catalog(object):
    """
    An ordered collection of classes of service with unique ids.
    """

    def __init__(self, classes=()):
        self._classes = OrderedDict()
        for cos in classes:
            if cos.cos_id in self._classes:
                raise ValueError("Duplicate class of service %r" % (cos.cos_id,))
            self._classes[cos.cos_id] = cos

    def __iter__(self):
        return iter(self._classes.values())

    def __len__(self):
        return len(self._classes)

    def __contains__(self, cos_id):
        return cos_id in self._classes

    def __getitem__(self, cos_id):
        return self._classes[cos_id]

    def get(self, cos_id, default=None):
        return self._classes.get(cos_id, default)

    def ids(self):
        return list(self._classes)

    def toExternalObject(self, **unused_kwargs):
        return {'classes': [to_external_object(cos) for cos in self]}

    def __repr__(self):
        return '<%s %s>' % (type(self).__name__, self.ids())


def canonical_catalog(trusted_senders=(), capacity=100,
                      fixed_price=5.0, congestion_base=1.0,
                      congestion_slope=0.5, congestion_ceiling=20.0):
    """
    The three canonical classes: a free trusted-only alert class for
    messages that benefit the receiver, a fixed-price class for messages
    that benefit the sender, and a congestion-priced class for messages
    that benefit both.
    """
    trusted = ClassOfService(
        cos_id=TRUSTED_COS,
        qos=QosDescriptor(availability=0.99,
                          accessibility=TRUSTED_ONLY,
                          integrity=True,
                          latency_s=60.0,
                          reliability=0.99,
                          flexibility=DEFAULT_FORMATS,
                          security=AUTHENTICATED,
                          recipient_properties=frozenset()),
        pricing=PricingPolicyConfig(kind=ACCEPT_ALL),
        trusted_senders=frozenset(trusted_senders),
        capacity=capacity,
        alert=True)
    fixed = ClassOfService(
        cos_id=FIXED_PRICE_COS,
        qos=QosDescriptor(availability=0.95,
                          accessibility=OPEN,
                          integrity=True,
                          latency_s=300.0,
                          reliability=0.95,
                          flexibility=DEFAULT_FORMATS,
                          security=NO_SECURITY,
                          recipient_properties=frozenset()),
        pricing=PricingPolicyConfig(kind=FIXED_PRICE,
                                    base_price=fixed_price),
        capacity=capacity)
    congestion = ClassOfService(
        cos_id=CONGESTION_COS,
        qos=QosDescriptor(availability=0.9,
                          accessibility=OPEN,
                          integrity=False,
                          latency_s=600.0,
                          reliability=0.9,
                          flexibility=DEFAULT_FORMATS,
                          security=NO_SECURITY,
                          recipient_properties=frozenset()),
        pricing=PricingPolicyConfig(kind=CONGESTION_PRICE,
                                    base_price=congestion_base,
                                    congestion_slope=congestion_slope,
                                    price_ceiling=congestion_ceiling),
        capacity=capacity)
    return Catalog((trusted, fixed, congestion))
