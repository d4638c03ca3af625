#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import none
from hamcrest import raises
from hamcrest import calling
from hamcrest import has_length
from hamcrest import assert_that
from hamcrest import has_property

import os
import shutil
import tempfile
import unittest

from nti.gridemail.model import Message

from nti.gridemail.services.interfaces import QUEUED
from nti.gridemail.services.interfaces import DELIVERED

from nti.gridemail.services.interfaces import NotFound
from nti.gridemail.services.interfaces import QueueFull
from nti.gridemail.services.interfaces import AuthFailed
from nti.gridemail.services.interfaces import DuplicateMessage

from nti.gridemail.services.journal import Journal

from nti.gridemail.services.queues import QueueStore

from nti.gridemail.services.queues import message_to_record
from nti.gridemail.services.queues import message_from_record


def _message(message_id, body=b'body', **kwargs):
    return Message(id=message_id, sender_id=u'alice', recipient_id=u'bob',
                   body=body, **kwargs)


class TestQueueStore(unittest.TestCase):

    def setUp(self):
        self.data_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.data_dir, ignore_errors=True)

    def _store(self, data_dir=None, capacity=3):
        return QueueStore({u'cos1': capacity, u'cos2': capacity},
                          data_dir=data_dir, recipient_id=u'bob',
                          credential=u'pw')

    def test_fifo(self):
        store = self._store()
        for i in range(3):
            assert_that(store.enqueue(u'cos1', _message(u'm%d' % i)),
                        is_(i + 1))
        assert_that(store.length(u'cos1'), is_(3))
        assert_that(store.length(u'cos2'), is_(0))

        first = store.fetch(u'cos1', u'bob', u'pw', 2)
        assert_that([m.id for m in first], is_([u'm0', u'm1']))
        assert_that(store.length(u'cos1'), is_(1))
        rest = store.fetch(u'cos1', u'bob', u'pw', 10)
        assert_that([m.id for m in rest], is_([u'm2']))
        assert_that(store.fetch(u'cos1', u'bob', u'pw', 10), is_([]))
        # delivered entries are retained
        assert_that(store.entries(u'cos1'), has_length(3))

    def test_duplicate_id(self):
        store = self._store()
        store.enqueue(u'cos1', _message(u'dup'))
        assert_that(calling(store.enqueue).with_args(u'cos1', _message(u'dup')),
                    raises(DuplicateMessage))
        assert_that(calling(store.enqueue).with_args(u'cos2', _message(u'dup')),
                    raises(DuplicateMessage))
        # a delivered message keeps its id
        store.fetch(u'cos1', u'bob', u'pw', 1)
        assert_that(calling(store.enqueue).with_args(u'cos1', _message(u'dup')),
                    raises(DuplicateMessage))
        assert_that(store.length(u'cos1'), is_(0))
        assert_that(store.length(u'cos2'), is_(0))

    def test_capacity(self):
        store = self._store(capacity=1)
        store.enqueue(u'cos1', _message(u'm0'))
        assert_that(calling(store.enqueue).with_args(u'cos1', _message(u'm1')),
                    raises(QueueFull))
        # delivery frees the slot
        store.fetch(u'cos1', u'bob', u'pw', 1)
        assert_that(store.enqueue(u'cos1', _message(u'm1')), is_(2))

    def test_queue_full_code(self):
        store = self._store(capacity=0)
        with self.assertRaises(QueueFull) as cm:
            store.enqueue(u'cos2', _message(u'm0'))
        assert_that(cm.exception.code, is_(507))

    def test_unknown_class(self):
        store = self._store()
        assert_that(calling(store.enqueue).with_args(u'cos9', _message(u'm0')),
                    raises(NotFound))
        assert_that(calling(store.fetch).with_args(u'cos9', u'bob', u'pw', 1),
                    raises(NotFound))
        assert_that(calling(store.length).with_args(u'cos9'),
                    raises(NotFound))

    def test_credentials(self):
        store = self._store()
        store.enqueue(u'cos1', _message(u'm0'))
        for recipient, credential in ((u'bob', u'nope'),
                                      (u'eve', u'pw'),
                                      (u'bob', u'p\xe4ss')):
            assert_that(calling(store.fetch).with_args(u'cos1', recipient,
                                                       credential, 1),
                        raises(AuthFailed))
        # credentials are checked before the class
        assert_that(calling(store.fetch).with_args(u'cos9', u'bob', u'x', 1),
                    raises(AuthFailed))
        assert_that(store.length(u'cos1'), is_(1))

    def test_open_store(self):
        store = QueueStore({u'cos1': 1})
        store.enqueue(u'cos1', _message(u'm0'))
        assert_that(store.fetch(u'cos1', u'anyone', u'anything', 1),
                    has_length(1))

    def test_status(self):
        store = self._store()
        store.enqueue(u'cos1', _message(u'm0'))
        assert_that(store.status(u'm0'), is_(QUEUED))
        assert_that(store.is_queued(u'm0'), is_(True))
        store.fetch(u'cos1', u'bob', u'pw', 1)
        assert_that(store.status(u'm0'), is_(DELIVERED))
        assert_that(store.is_queued(u'm0'), is_(False))
        assert_that(store.status(u'nope'), is_(none()))

    def test_durable_across_restart(self):
        store = self._store(self.data_dir)
        body = b'\x00binary\r\n'
        store.enqueue(u'cos1', _message(u'm0', body=body, payment=u'tok',
                                        cos_id=u'cos1'))
        store.enqueue(u'cos1', _message(u'm1'))
        store.enqueue(u'cos2', _message(u'm2'))
        store.fetch(u'cos1', u'bob', u'pw', 1)
        assert_that(os.path.exists(os.path.join(self.data_dir,
                                                'queue-cos1.jsonl')),
                    is_(True))

        reopened = self._store(self.data_dir)
        assert_that(reopened.length(u'cos1'), is_(1))
        assert_that(reopened.length(u'cos2'), is_(1))
        assert_that(reopened.status(u'm0'), is_(DELIVERED))
        entry = reopened.entries(u'cos1')[0]
        assert_that(entry.message.body, is_(body))
        assert_that(entry.message, has_property('payment', u'tok'))
        assert_that(reopened.enqueue(u'cos1', _message(u'm3')), is_(3))
        fetched = reopened.fetch(u'cos1', u'bob', u'pw', 5)
        assert_that([m.id for m in fetched], is_([u'm1', u'm3']))

    def test_torn_record_is_ignored(self):
        store = self._store(self.data_dir)
        store.enqueue(u'cos1', _message(u'm0'))
        path = os.path.join(self.data_dir, 'queue-cos1.jsonl')
        with open(path, 'ab') as f:
            f.write(b'{"op":"enqueue","rece')
        reopened = self._store(self.data_dir)
        assert_that(reopened.length(u'cos1'), is_(1))
        # the torn tail is cut so the journal stays readable
        reopened.enqueue(u'cos1', _message(u'm1'))
        again = self._store(self.data_dir)
        assert_that(again.length(u'cos1'), is_(2))


class TestRecords(unittest.TestCase):

    def test_message_record(self):
        message = _message(u'm0', body=b'\xff\xfe', stamp=u's1',
                           format_tag=u'html')
        record = message_to_record(message)
        assert_that(record['body'], is_(u'//4='))
        restored = message_from_record(record)
        assert_that(restored.body, is_(b'\xff\xfe'))
        assert_that(restored.size_bytes, is_(2))
        assert_that(restored.stamp, is_(u's1'))
        assert_that(restored.format_tag, is_(u'html'))

    def test_journal(self):
        tmp = tempfile.mkdtemp()
        try:
            journal = Journal(os.path.join(tmp, 'j.jsonl'))
            assert_that(list(journal.records()), is_([]))
            journal.append({'b': 2, 'a': 1})
            journal.append({'c': [1, 2]})
            with open(journal.path, 'rb') as f:
                assert_that(f.readline(), is_(b'{"a":1,"b":2}\n'))
            assert_that(list(journal.records()),
                        is_([{'a': 1, 'b': 2}, {'c': [1, 2]}]))
        finally:
            shutil.rmtree(tmp)
