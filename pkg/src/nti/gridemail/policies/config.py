#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from zope import interface

from nti.externalization.externalization import to_standard_external_dictionary

from nti.externalization.representation import WithRepr

from nti.gridemail import MetaGridEmailObject

from nti.gridemail.policies.interfaces import ADAPTIVE_PRICE
from nti.gridemail.policies.interfaces import FIXED_PRICE
from nti.gridemail.policies.interfaces import PRICED_KINDS
from nti.gridemail.policies.interfaces import CONGESTION_PRICE

from nti.gridemail.policies.interfaces import IPricingPolicyConfig

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('kind', 'base_price', 'congestion_slope', 'adapt_gamma',
        'adapt_window', 'price_floor', 'price_ceiling', 'time_cap_minutes',
        'opportunity_rate', 'enforce_time_cap')
@interface.implementer(IPricingPolicyConfig)
class PricingPolicyConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IPricingPolicyConfig)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        IPricingPolicyConfig.validateInvariants(self)

    @property
    def priced(self):
        return self.kind in PRICED_KINDS

    def clamp(self, price):
        price = max(self.price_floor, price)
        if self.price_ceiling is not None:
            price = min(self.price_ceiling, price)
        return price

    @property
    def minimum_price(self):
        """
        The smallest price this policy can ever quote.
        """
        if self.kind in (FIXED_PRICE, CONGESTION_PRICE):
            return self.base_price
        if self.kind == ADAPTIVE_PRICE:
            return self.price_floor
        return 0.0

    def toExternalObject(self, **unused_kwargs):
        result = to_standard_external_dictionary(self)
        for name in IPricingPolicyConfig.names():
            value = getattr(self, name)
            if value is not None:
                result[name] = value
        return result
