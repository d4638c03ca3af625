#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Urgent-arrival alerts.

An alert is a notice that a message is waiting; the message itself stays
queued until it is fetched. Dispatch never raises: a sink that keeps
failing is logged and the alert dropped.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import time
import socket
import threading

import simplejson

from zope import interface

from zope import event as zope_event

from nti.externalization.representation import WithRepr

from nti.gridemail.services.interfaces import LOG_SINK
from nti.gridemail.services.interfaces import UDP_SINK
from nti.gridemail.services.interfaces import DEFAULT_ATTEMPTS

from nti.gridemail.services.interfaces import IAlertSink
from nti.gridemail.services.interfaces import IAlertRecord

from nti.gridemail.services.interfaces import AlertDispatchedEvent

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('message_id', 'cos_id', 'timestamp')
@interface.implementer(IAlertRecord)
class AlertRecord(SchemaConfigured):
    createDirectFieldProperties(IAlertRecord)

    def to_json(self):
        return simplejson.dumps({'message_id': self.message_id,
                                 'cos_id': self.cos_id,
                                 'timestamp': self.timestamp},
                                sort_keys=True)


@interface.implementer(IAlertSink)
class LogFileAlertSink(object):
    """
    Appends one JSON line per alert.
    """

    def __init__(self, path):
        self.path = path

    def deliver(self, record):
        with open(self.path, 'a') as f:
            f.write(record.to_json() + '\n')


@interface.implementer(IAlertSink)
class UdpAlertSink(object):
    """
    Sends each alert as a single datagram.
    """

    def __init__(self, address):
        self.address = address

    def deliver(self, record):
        sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        try:
            sock.sendto(record.to_json().encode('utf-8'),
                        self.address.as_tuple())
        finally:
            sock.close()


@interface.implementer(IAlertSink)
class MemoryAlertSink(object):

    def __init__(self):
        self.records = []

    def deliver(self, record):
        self.records.append(record)


def sink_from_config(config):
    if config.kind == UDP_SINK:
        return UdpAlertSink(config.address)
    assert config.kind == LOG_SINK
    return LogFileAlertSink(config.path)


class AlertDispatcher(object):
    """
    Sends at most one alert per message id to ``sink``.
    """

    def __init__(self, sink, attempts=DEFAULT_ATTEMPTS, backoff_s=0.1,
                 sleep=time.sleep, clock=time.time):
        self.sink = sink
        self.attempts = attempts
        self.backoff_s = backoff_s
        self.sleep = sleep
        self.clock = clock
        self._lock = threading.Lock()
        self._sent = set()

    def dispatch(self, message_id, cos_id):
        """
        :return: The delivered :class:`AlertRecord`, or None when the
            message was already alerted or the sink failed.
        """
        with self._lock:
            if message_id in self._sent:
                return None
            self._sent.add(message_id)
        record = AlertRecord(message_id=message_id, cos_id=cos_id,
                             timestamp=self.clock())
        for attempt in range(self.attempts):
            try:
                self.sink.deliver(record)
            except Exception:  # pylint: disable=broad-except
                logger.warning("Alert for %s failed (attempt %d of %d)",
                               message_id, attempt + 1, self.attempts,
                               exc_info=True)
                if attempt + 1 < self.attempts:
                    self.sleep(self.backoff_s * (2 ** attempt))
                continue
            logger.info("Alerted %s in %s", message_id, cos_id)
            zope_event.notify(AlertDispatchedEvent(record))
            return record
        logger.error("Dropped alert for %s after %d attempts",
                     message_id, self.attempts)
        zope_event.notify(AlertDispatchedEvent(record, delivered=False))
        return None

    def forget(self, message_ids):
        """
        Stop tracking messages that were fetched.
        """
        with self._lock:
            self._sent.difference_update(message_ids)
