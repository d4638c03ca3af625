#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import copy

from zope import interface

from nti.externalization.representation import WithRepr

from nti.gridemail.policies.interfaces import ADAPTIVE_PRICE

from nti.gridemail.policies.interfaces import IPolicyState

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('current_price', 'queue_length', 'committed_minutes',
        'exclusive_budget_minutes', 'window_accept_count',
        'window_offer_count')
@interface.implementer(IPolicyState)
class PolicyState(SchemaConfigured):
    """
    Treated as a value: the policy operations return updated copies.
    """
    createDirectFieldProperties(IPolicyState)

    def replace(self, **changes):
        result = copy.copy(self)
        for name, value in changes.items():
            setattr(result, name, value)
        return result


def initial_state(cfg, **kwargs):
    """
    A fresh state for the given policy, priced at the base price.
    """
    if cfg.kind == ADAPTIVE_PRICE:
        kwargs.setdefault('current_price', cfg.clamp(cfg.base_price))
    return PolicyState(**kwargs)
