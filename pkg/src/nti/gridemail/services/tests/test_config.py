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
from hamcrest import assert_that
from hamcrest import has_property
from hamcrest import contains_string

import os
import shutil
import tempfile
import unittest

import simplejson

from nti.gridemail import GRIDEMAIL_CONFIG

from nti.gridemail.internalization import ConfigurationError

from nti.gridemail.services.config import resolve
from nti.gridemail.services.config import load_config
from nti.gridemail.services.config import config_path
from nti.gridemail.services.config import parse_address
from nti.gridemail.services.config import config_from_external

from nti.gridemail.services.receiver import ReceiverService


class TestAddresses(unittest.TestCase):

    def test_parse(self):
        address = parse_address(u'example.org:2525')
        assert_that(address.as_tuple(), is_((u'example.org', 2525)))
        assert_that(str(address), is_('example.org:2525'))
        assert_that(parse_address(u':25').host, is_(u'127.0.0.1'))
        assert_that(parse_address({'host': u'h', 'port': 1}).port, is_(1))
        assert_that(parse_address(address), is_(address))

    def test_invalid(self):
        for value in (u'nohost', u'h:port', u'h:70000', {'port': 1, 'x': 2}):
            assert_that(calling(parse_address).with_args(value),
                        raises(ConfigurationError))


class TestConfig(unittest.TestCase):

    def test_receiver(self):
        config = config_from_external('receiver', {
            'listen': u'127.0.0.1:0',
            'catalog': u'catalog.json',
            'recipient_id': u'bob',
            'credential': u'pw',
            'payment': u'127.0.0.1:7001',
            'alerts': {'kind': u'udp', 'address': u'127.0.0.1:7100'},
        })
        assert_that(config.listen.port, is_(0))
        assert_that(config.payment.port, is_(7001))
        assert_that(config.identity, is_(none()))
        assert_that(config.alerts, has_property('attempts', 3))
        assert_that(config.alerts.address.port, is_(7100))

    def test_sender_retry(self):
        config = config_from_external('sender', {
            'listen': u':7200',
            'payment': u':7001',
            'retry': {'attempts': 4, 'backoff_s': 0.25, 'retry_codes': [507, 429]},
        })
        assert_that(config.retry.retry_codes, is_((507, 429)))
        assert_that(config.retry.delay(2), is_(1.0))

    def test_errors_name_the_document(self):
        with self.assertRaises(ConfigurationError) as cm:
            config_from_external('receiver', {'listen': u':0'}, u'recv.json')
        assert_that(str(cm.exception), contains_string(u'recv.json'))

        for kind, ext in (('payment', {'listen': u':0', 'unknown': 1}),
                          ('identity', {'listen': u':0',
                                        'secrets': {u'alice': u''}}),
                          ('receiver', {'listen': u':0', 'catalog': u'c',
                                        'recipient_id': u'bob',
                                        'credential': u'pw',
                                        'alerts': {'kind': u'log'}}),
                          ('sender', {'listen': u':0', 'payment': u':1',
                                      'retry': {'attempts': 0}}),
                          ('mailer', {})):
            assert_that(calling(config_from_external).with_args(kind, ext),
                        raises(ConfigurationError), kind)

    def test_config_path(self):
        assert_that(config_path('a.json'), is_('a.json'))
        previous = os.environ.pop(GRIDEMAIL_CONFIG, None)
        try:
            assert_that(calling(config_path), raises(ConfigurationError))
            os.environ[GRIDEMAIL_CONFIG] = 'b.json'
            assert_that(config_path(), is_('b.json'))
        finally:
            os.environ.pop(GRIDEMAIL_CONFIG, None)
            if previous is not None:
                os.environ[GRIDEMAIL_CONFIG] = previous

    def test_resolve(self):
        assert_that(resolve('/etc/grid/recv.json', 'catalog.json'),
                    is_('/etc/grid/catalog.json'))
        assert_that(resolve('/etc/grid/recv.json', '/abs.json'), is_('/abs.json'))
        assert_that(resolve(None, 'c.json'), is_('c.json'))
        assert_that(resolve('/etc/grid/recv.json', None), is_(none()))


class TestReceiverFromConfig(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def _write(self, name, document):
        path = os.path.join(self.tmp, name)
        with open(path, 'w') as f:
            simplejson.dump(document, f)
        return path

    def test_from_config(self):
        self._write('catalog.json', {'classes': [{
            'cos_id': u'cos1',
            'qos': {'accessibility': u'open', 'integrity': True},
            'pricing': {'kind': u'fixed_price', 'base_price': 2.0},
            'capacity': 5,
        }]})
        path = self._write('receiver.json', {
            'listen': u'127.0.0.1:0',
            'catalog': u'catalog.json',
            'data_dir': u'queues',
            'recipient_id': u'bob',
            'credential': u'pw',
            'alerts': {'kind': u'log', 'path': u'alerts.jsonl'},
        })
        config = load_config('receiver', path)
        service = ReceiverService.from_config(config, path)
        assert_that(service.catalog[u'cos1'].capacity, is_(5))
        assert_that(service.store.data_dir,
                    is_(os.path.join(self.tmp, 'queues')))
        assert_that(os.path.isdir(os.path.join(self.tmp, 'queues')), is_(True))
        assert_that(service.alerts.sink.path,
                    is_(os.path.join(self.tmp, 'alerts.jsonl')))
        assert_that(service.recipient_id, is_(u'bob'))

    def test_bad_document(self):
        path = os.path.join(self.tmp, 'broken.json')
        with open(path, 'w') as f:
            f.write('{"listen": ')
        assert_that(calling(load_config).with_args('receiver', path),
                    raises(ConfigurationError))
        assert_that(calling(load_config).with_args('receiver',
                                                   os.path.join(self.tmp, 'missing.json')),
                    raises(ConfigurationError))
