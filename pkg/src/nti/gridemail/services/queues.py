#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Per class of service message queues.

Each queue is a ``LOBTree`` of entries keyed by receipt id. With a data
directory every change is appended to ``queue-<cos_id>.jsonl`` and
flushed to disk before the call returns; opening a store replays those
files.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os
import hmac
import time
import base64
import threading

from BTrees.LOBTree import LOBTree

from BTrees.OOBTree import OOBTree

from zope import interface

from nti.externalization.representation import WithRepr

from nti.gridemail.model import Message

from nti.gridemail.services.interfaces import QUEUED
from nti.gridemail.services.interfaces import DELIVERED

from nti.gridemail.services.interfaces import NotFound
from nti.gridemail.services.interfaces import QueueFull
from nti.gridemail.services.interfaces import AuthFailed
from nti.gridemail.services.interfaces import DuplicateMessage

from nti.gridemail.services.interfaces import IQueueEntry
from nti.gridemail.services.interfaces import IQueueStore

from nti.gridemail.services.journal import Journal

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

ENQUEUE = u'enqueue'
DELIVER = u'deliver'

#: Fields of a message written to a queue file
MESSAGE_FIELDS = ('id', 'sender_id', 'recipient_id', 'format_tag', 'stamp',
                  'payment', 'cos_id', 'authenticator')

logger = __import__('logging').getLogger(__name__)


@WithRepr
@interface.implementer(IQueueEntry)
class QueueEntry(SchemaConfigured):
    createDirectFieldProperties(IQueueEntry)


def message_to_record(message):
    result = {name: getattr(message, name) for name in MESSAGE_FIELDS
              if getattr(message, name) is not None}
    result['body'] = base64.b64encode(message.body).decode('ascii')
    return result


def message_from_record(record):
    kwargs = {name: record[name] for name in MESSAGE_FIELDS if name in record}
    kwargs['body'] = base64.b64decode(record['body'])
    return Message(**kwargs)


@interface.implementer(IQueueStore)
class QueueStore(object):
    """
    The queues of one recipient.

    :param dict capacities: Queue capacity by class id; classes not named
        do not exist.
    :param str data_dir: Where queue journals live; None keeps the store
        in memory.
    :param str recipient_id: With ``credential``, who may fetch.
    """

    def __init__(self, capacities, data_dir=None, recipient_id=None,
                 credential=None, clock=time.time):
        self.capacities = dict(capacities)
        self.data_dir = data_dir
        self.recipient_id = recipient_id
        self.credential = credential
        self.clock = clock
        self._lock = threading.RLock()
        self._queues = {cos_id: LOBTree() for cos_id in self.capacities}
        # receipts not yet delivered, in order, per class
        self._pending = {cos_id: LOBTree() for cos_id in self.capacities}
        self._by_message = OOBTree()
        self._journals = {}
        if data_dir:
            if not os.path.isdir(data_dir):
                os.makedirs(data_dir)
            for cos_id in self.capacities:
                self._journals[cos_id] = Journal(os.path.join(data_dir,
                                                               'queue-%s.jsonl' % cos_id))
            self._replay()

    def _replay(self):
        for cos_id, journal in self._journals.items():
            count = 0
            for record in journal.records():
                if record['op'] == ENQUEUE:
                    self._add(cos_id, record['receipt_id'],
                              message_from_record(record['message']),
                              record['enqueued_at'])
                    count += 1
                elif record['op'] == DELIVER:
                    self._mark_delivered(cos_id, record['receipt_ids'])
            if count:
                logger.info("Replayed %d messages of %s", count, cos_id)

    def _queue(self, cos_id):
        try:
            return self._queues[cos_id]
        except KeyError:
            raise NotFound("No class of service %s" % cos_id)

    def _add(self, cos_id, receipt_id, message, enqueued_at):
        entry = QueueEntry(receipt_id=receipt_id, cos_id=cos_id,
                           message=message, enqueued_at=enqueued_at)
        self._queues[cos_id][receipt_id] = entry
        self._pending[cos_id][receipt_id] = True
        self._by_message[message.id] = (cos_id, receipt_id)
        return entry

    def _mark_delivered(self, cos_id, receipt_ids):
        queue = self._queues[cos_id]
        pending = self._pending[cos_id]
        for receipt_id in receipt_ids:
            queue[receipt_id].state = DELIVERED
            pending.pop(receipt_id, None)

    def length(self, cos_id):
        self._queue(cos_id)
        return len(self._pending[cos_id])

    def enqueue(self, cos_id, message):
        with self._lock:
            queue = self._queue(cos_id)
            if message.id in self._by_message:
                raise DuplicateMessage("Message %s is already in the store" % message.id)
            if len(self._pending[cos_id]) >= self.capacities[cos_id]:
                raise QueueFull("Queue %s is full" % cos_id)
            receipt_id = queue.maxKey() + 1 if queue else 1
            enqueued_at = self.clock()
            journal = self._journals.get(cos_id)
            if journal is not None:
                journal.append({'op': ENQUEUE,
                                'receipt_id': receipt_id,
                                'enqueued_at': enqueued_at,
                                'message': message_to_record(message)})
            self._add(cos_id, receipt_id, message, enqueued_at)
        logger.info("Queued %s in %s as %s", message.id, cos_id, receipt_id)
        return receipt_id

    def check_credentials(self, recipient_id, credential):
        if self.credential is None:
            return
        if     recipient_id != self.recipient_id \
            or not hmac.compare_digest(str(credential).encode('utf-8'),
                                       str(self.credential).encode('utf-8')):
            raise AuthFailed("Bad recipient credentials")

    def fetch(self, cos_id, recipient_id, credential, max_n):
        """
        The oldest ``max_n`` queued messages of ``cos_id``, which become
        delivered. Delivered entries stay in the queue.
        """
        self.check_credentials(recipient_id, credential)
        with self._lock:
            queue = self._queue(cos_id)
            receipts = []
            for receipt_id in self._pending[cos_id]:
                if len(receipts) >= max_n:
                    break
                receipts.append(receipt_id)
            if not receipts:
                return []
            journal = self._journals.get(cos_id)
            if journal is not None:
                journal.append({'op': DELIVER, 'receipt_ids': receipts})
            self._mark_delivered(cos_id, receipts)
            return [queue[r].message for r in receipts]

    def entries(self, cos_id):
        return list(self._queue(cos_id).values())

    def status(self, message_id):
        """
        The delivery state of ``message_id``, or None when unknown.
        """
        try:
            cos_id, receipt_id = self._by_message[message_id]
        except KeyError:
            return None
        return self._queues[cos_id][receipt_id].state

    def is_queued(self, message_id):
        return self.status(message_id) == QUEUED
