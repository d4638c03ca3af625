#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The sender/receiver benefit grid and its mapping onto classes of service.

A coordinate at or above its threshold counts as beneficial.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import math

from nti.gridemail.interfaces import MUTUAL
from nti.gridemail.interfaces import NEITHER
from nti.gridemail.interfaces import SENDER_ONLY
from nti.gridemail.interfaces import TRUSTED_COS
from nti.gridemail.interfaces import RECEIVER_ONLY
from nti.gridemail.interfaces import CONGESTION_COS
from nti.gridemail.interfaces import FIXED_PRICE_COS

from nti.gridemail.model import GridRegion

DEFAULT_THRESHOLDS = (0.0, 0.0)

#: The canonical class serving each region
REGION_COS = {
    RECEIVER_ONLY: TRUSTED_COS,
    SENDER_ONLY: FIXED_PRICE_COS,
    MUTUAL: CONGESTION_COS,
}

_REGIONS = {
    (True, True): GridRegion(MUTUAL),
    (True, False): GridRegion(SENDER_ONLY),
    (False, True): GridRegion(RECEIVER_ONLY),
    (False, False): GridRegion(NEITHER),
}

logger = __import__('logging').getLogger(__name__)


def classify(sender_benefit, receiver_benefit, thresholds=DEFAULT_THRESHOLDS):
    values = (sender_benefit, receiver_benefit) + tuple(thresholds)
    if len(values) != 4 or not all(math.isfinite(v) for v in values):
        raise ValueError("Benefits and thresholds must be finite")
    sender_threshold, receiver_threshold = thresholds
    return _REGIONS[(sender_benefit >= sender_threshold,
                     receiver_benefit >= receiver_threshold)]


def classify_benefit(point, thresholds=DEFAULT_THRESHOLDS):
    """
    The :class:`~.GridRegion` of an :class:`~.IBenefitPoint`.
    """
    return classify(point.sender_benefit, point.receiver_benefit, thresholds)


def region_to_cos(region, catalog):
    """
    The id of the catalog class serving ``region``, or None when the
    region has no class or the class is missing from the catalog.
    """
    cos_id = REGION_COS.get(region)
    if cos_id is None:
        return None
    for cos in catalog:
        if cos.cos_id == cos_id:
            return cos_id
    return None
