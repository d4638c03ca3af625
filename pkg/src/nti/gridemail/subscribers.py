#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Audit subscribers for the daemons' domain events.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import time
import threading
import collections

from zope import component
from zope import interface

from nti.gridemail.interfaces import IAuditTrail
from nti.gridemail.interfaces import IMessageAcceptedEvent
from nti.gridemail.interfaces import IMessageRejectedEvent

from nti.gridemail.services.interfaces import ITokenEvent
from nti.gridemail.services.interfaces import IAlertDispatchedEvent

#: Entry kinds
ACCEPTED_KIND = u'accepted'
REJECTED_KIND = u'rejected'
TOKEN_KIND = u'token'
ALERT_KIND = u'alert'

#: Entries an :class:`AuditTrail` keeps by default
DEFAULT_AUDIT_SIZE = 10000

logger = __import__('logging').getLogger(__name__)


@interface.implementer(IAuditTrail)
class AuditTrail(object):

    def __init__(self, size=DEFAULT_AUDIT_SIZE, clock=time.time):
        self.clock = clock
        self._lock = threading.Lock()
        self._entries = collections.deque(maxlen=size)

    def record(self, kind, **details):
        details['kind'] = kind
        details['timestamp'] = self.clock()
        with self._lock:
            self._entries.append(details)

    def entries(self, kind=None):
        with self._lock:
            return [e for e in self._entries if kind is None or e['kind'] == kind]

    def clear(self):
        with self._lock:
            self._entries.clear()


def _record(kind, **details):
    trail = component.queryUtility(IAuditTrail)
    if trail is None:
        return
    try:
        trail.record(kind, **details)
    except Exception:  # pylint: disable=broad-except
        logger.exception("Cannot audit %s", kind)


@component.adapter(IMessageAcceptedEvent)
def _message_accepted(event):
    message = event.message
    logger.info("Accepted %s from %s into %s", message.id, message.sender_id,
                event.cos_id)
    _record(ACCEPTED_KIND, message_id=message.id, sender_id=message.sender_id,
            cos_id=event.cos_id, receipt_id=event.receipt_id)


@component.adapter(IMessageRejectedEvent)
def _message_rejected(event):
    meta = event.message
    _record(REJECTED_KIND, message_id=meta.id, sender_id=meta.sender_id,
            code=event.code, reason=event.reason)


@component.adapter(ITokenEvent)
def _token_changed(event):
    record = event.record
    _record(TOKEN_KIND, token=record.token, state=event.state,
            amount=record.amount, payer=record.payer, payee=record.payee)


@component.adapter(IAlertDispatchedEvent)
def _alert_dispatched(event):
    record = event.record
    _record(ALERT_KIND, message_id=record.message_id, cos_id=record.cos_id,
            delivered=event.delivered)
