#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Matching sender profiles against a class of service catalog.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from nti.gridemail.interfaces import OPEN
from nti.gridemail.interfaces import TRUSTED_ONLY
from nti.gridemail.interfaces import AUTHENTICATED

logger = __import__('logging').getLogger(__name__)


def minimum_price(cos):
    """
    The smallest price a class can quote.
    """
    return cos.pricing.minimum_price


def _latency_limit(required, max_latency_s):
    limits = [x for x in (getattr(required, 'latency_s', None), max_latency_s)
              if x is not None]
    return min(limits) if limits else None


def _at_least(offered, wanted):
    return wanted is None or (offered is not None and offered >= wanted)


def _contains(offered, wanted):
    return not wanted or frozenset(wanted) <= frozenset(offered or ())


def qos_dominates(offered, required, max_latency_s=None):
    """
    Whether the ``offered`` descriptor satisfies every field the partial
    ``required`` descriptor sets, and the latency bound.
    """
    limit = _latency_limit(required, max_latency_s)
    if limit is not None and (offered.latency_s is None or offered.latency_s > limit):
        return False
    if required is None:
        return True
    if not _at_least(offered.availability, required.availability):
        return False
    if not _at_least(offered.reliability, required.reliability):
        return False
    if required.integrity and not offered.integrity:
        return False
    if required.accessibility == TRUSTED_ONLY and offered.accessibility != TRUSTED_ONLY:
        return False
    # A sender asking for an open class cannot use a restricted one
    if required.accessibility == OPEN and offered.accessibility == TRUSTED_ONLY:
        return False
    if required.security == AUTHENTICATED and offered.security != AUTHENTICATED:
        return False
    if not _contains(offered.flexibility, required.flexibility):
        return False
    return _contains(offered.recipient_properties, required.recipient_properties)


def _sort_key(cos):
    latency = cos.qos.latency_s
    return (minimum_price(cos),
            float('inf') if latency is None else latency,
            cos.cos_id)


def match_cos(profile, catalog):
    """
    The ids of the classes suitable for ``profile``, cheapest first, then
    fastest, then by id.
    """
    seen = set()
    matches = []
    for cos in catalog:
        if cos.cos_id in seen:
            continue
        seen.add(cos.cos_id)
        if      minimum_price(cos) <= profile.budget \
            and qos_dominates(cos.qos, profile.required_qos, profile.max_latency_s):
            matches.append(cos)
    matches.sort(key=_sort_key)
    return [cos.cos_id for cos in matches]
