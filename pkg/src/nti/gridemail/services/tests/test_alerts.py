#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import none
from hamcrest import has_length
from hamcrest import assert_that
from hamcrest import has_entries
from hamcrest import has_property
from hamcrest import instance_of

import os
import socket
import shutil
import tempfile
import unittest

import simplejson

from nti.gridemail.services.alerts import AlertRecord
from nti.gridemail.services.alerts import UdpAlertSink
from nti.gridemail.services.alerts import AlertDispatcher
from nti.gridemail.services.alerts import MemoryAlertSink
from nti.gridemail.services.alerts import LogFileAlertSink

from nti.gridemail.services.alerts import sink_from_config

from nti.gridemail.services.config import Address
from nti.gridemail.services.config import AlertSinkConfig


class FlakySink(object):

    def __init__(self, failures):
        self.failures = failures
        self.records = []

    def deliver(self, record):
        if self.failures:
            self.failures -= 1
            raise IOError("sink down")
        self.records.append(record)


class TestAlertDispatcher(unittest.TestCase):

    def test_dispatch_once_per_message(self):
        sink = MemoryAlertSink()
        dispatcher = AlertDispatcher(sink, clock=lambda: 42.0)
        record = dispatcher.dispatch(u'm1', u'cos1')
        assert_that(record, is_(AlertRecord(message_id=u'm1', cos_id=u'cos1',
                                            timestamp=42.0)))
        assert_that(dispatcher.dispatch(u'm1', u'cos1'), is_(none()))
        dispatcher.dispatch(u'm2', u'cos1')
        assert_that(sink.records, has_length(2))

    def test_forget_fetched(self):
        dispatcher = AlertDispatcher(MemoryAlertSink())
        dispatcher.dispatch(u'm1', u'cos1')
        dispatcher.dispatch(u'm2', u'cos1')
        dispatcher.forget([u'm1', u'unknown'])
        assert_that(dispatcher._sent, is_({u'm2'}))

    def test_retries_with_backoff(self):
        sleeps = []
        sink = FlakySink(2)
        dispatcher = AlertDispatcher(sink, attempts=3, backoff_s=0.5,
                                     sleep=sleeps.append)
        assert_that(dispatcher.dispatch(u'm1', u'cos1'),
                    instance_of(AlertRecord))
        assert_that(sleeps, is_([0.5, 1.0]))
        assert_that(sink.records, has_length(1))

    def test_gives_up_without_raising(self):
        sleeps = []
        sink = FlakySink(5)
        dispatcher = AlertDispatcher(sink, attempts=2, sleep=sleeps.append)
        assert_that(dispatcher.dispatch(u'm1', u'cos1'), is_(none()))
        assert_that(sleeps, has_length(1))
        assert_that(sink.records, has_length(0))
        # not retried later either
        sink.failures = 0
        assert_that(dispatcher.dispatch(u'm1', u'cos1'), is_(none()))


class TestSinks(unittest.TestCase):

    def test_record_json(self):
        record = AlertRecord(message_id=u'm1', cos_id=u'cos1', timestamp=1.5)
        assert_that(simplejson.loads(record.to_json()),
                    has_entries('message_id', u'm1',
                                'cos_id', u'cos1',
                                'timestamp', 1.5))

    def test_log_file(self):
        tmp = tempfile.mkdtemp()
        try:
            path = os.path.join(tmp, 'alerts.jsonl')
            config = AlertSinkConfig(kind=u'log', path=path)
            sink = sink_from_config(config)
            assert_that(sink, instance_of(LogFileAlertSink))
            dispatcher = AlertDispatcher(sink)
            dispatcher.dispatch(u'm1', u'cos1')
            dispatcher.dispatch(u'm2', u'cos1')
            with open(path) as f:
                lines = [simplejson.loads(line) for line in f]
            assert_that([line['message_id'] for line in lines],
                        is_([u'm1', u'm2']))
        finally:
            shutil.rmtree(tmp)

    def test_udp(self):
        listener = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        try:
            listener.bind(('127.0.0.1', 0))
            listener.settimeout(5)
            port = listener.getsockname()[1]
            config = AlertSinkConfig(kind=u'udp',
                                     address=Address(host=u'127.0.0.1', port=port))
            sink = sink_from_config(config)
            assert_that(sink, instance_of(UdpAlertSink))
            assert_that(sink, has_property('address', config.address))
            AlertDispatcher(sink).dispatch(u'm1', u'cos1')
            data, _ = listener.recvfrom(4096)
            assert_that(simplejson.loads(data.decode('utf-8')),
                        has_entries('message_id', u'm1', 'cos_id', u'cos1'))
        finally:
            listener.close()
