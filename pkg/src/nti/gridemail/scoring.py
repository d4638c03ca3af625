#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Additive admission scoring.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from nti.gridemail.model import AdmissionScore

#: Component names of an :class:`~.AdmissionScore`
SOURCE = u'source'
STAMP = u'stamp'
FORMAT = u'format'

logger = __import__('logging').getLogger(__name__)


def score_message(meta, cfg, stamp_valid=False):
    """
    Score a message by its source, reply-paid stamp and format. Rules
    with no configured entry contribute 0.

    :param meta: An :class:`~.IMessageMeta`.
    :param cfg: An :class:`~.IScoringConfig`.
    :param bool stamp_valid: Whether the message's stamp was issued by the
        recipient.
    """
    source_points = cfg.source_points or {}
    format_points = cfg.format_points or {}
    category = cfg.category(meta.sender_id)
    components = {
        SOURCE: float(source_points.get(category, 0.0)) if category else 0.0,
        STAMP: float(cfg.stamp_points or 0.0) if stamp_valid else 0.0,
        FORMAT: float(format_points.get(meta.format_tag, 0.0)),
    }
    total = components[SOURCE] + components[STAMP] + components[FORMAT]
    return AdmissionScore(total=total, components=components)
