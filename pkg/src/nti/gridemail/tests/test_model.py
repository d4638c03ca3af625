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
from hamcrest import has_entry
from hamcrest import has_entries
from hamcrest import assert_that

from nti.testing.matchers import validly_provides
from nti.testing.matchers import verifiably_provides

import hashlib
import unittest

from zope import interface

from zope.schema.interfaces import TooBig
from zope.schema.interfaces import TooSmall
from zope.schema.interfaces import ConstraintNotSatisfied

from nti.externalization.externalization import to_external_object

from nti.gridemail.interfaces import MUTUAL
from nti.gridemail.interfaces import TRUSTED_ONLY

from nti.gridemail.interfaces import IMessage
from nti.gridemail.interfaces import IMessageMeta
from nti.gridemail.interfaces import IQosDescriptor
from nti.gridemail.interfaces import IClassOfService

from nti.gridemail.model import Message
from nti.gridemail.model import GridRegion
from nti.gridemail.model import BenefitPoint
from nti.gridemail.model import QosDescriptor
from nti.gridemail.model import SenderProfile
from nti.gridemail.model import ClassOfService


class TestModel(unittest.TestCase):

    def test_qos(self):
        qos = QosDescriptor(availability=0.5, latency_s=10.0,
                            accessibility=TRUSTED_ONLY)
        assert_that(qos, validly_provides(IQosDescriptor))
        assert_that(qos, verifiably_provides(IQosDescriptor))
        assert_that(qos, is_(QosDescriptor(availability=0.5, latency_s=10.0,
                                           accessibility=TRUSTED_ONLY)))

        assert_that(calling(QosDescriptor).with_args(availability=1.5),
                    raises(TooBig))
        assert_that(calling(QosDescriptor).with_args(reliability=-0.1),
                    raises(TooSmall))
        assert_that(calling(QosDescriptor).with_args(latency_s=0.0),
                    raises(interface.Invalid))

    def test_qos_externalization(self):
        qos = QosDescriptor(flexibility=frozenset((u'plain', u'ical')))
        ext = to_external_object(qos)
        assert_that(ext,
                    has_entries('MimeType', 'application/vnd.nextthought.gridemail.qosdescriptor',
                                'flexibility', [u'ical', u'plain']))

    def test_profile_budget(self):
        assert_that(calling(SenderProfile).with_args(budget=-1.0),
                    raises(TooSmall))
        assert_that(SenderProfile().budget, is_(0.0))

    def test_message(self):
        msg = Message(id=u'm1', sender_id=u'alice', body=b'hello')
        assert_that(msg, validly_provides(IMessage))
        assert_that(msg.size_bytes, is_(5))
        assert_that(msg.format_tag, is_(u'plain'))
        assert_that(msg.message_id, is_(u'm1'))

        meta = msg.meta()
        assert_that(meta, validly_provides(IMessageMeta))
        assert_that(meta.digest,
                    is_(hashlib.sha256(b'hello').hexdigest()))
        assert_that(meta.size_bytes, is_(5))

        assert_that(calling(Message).with_args(id=u'm1', sender_id=u'alice',
                                               body=b'hello', size_bytes=4),
                    raises(ValueError))

    def test_class_of_service(self):
        cos = ClassOfService(cos_id=u'c', qos=QosDescriptor())
        assert_that(cos, validly_provides(IClassOfService))
        assert_that(cos.capacity, is_(100))
        assert_that(cos.pricing.kind, is_(u'accept_all'))
        assert_that(cos.trusted_only, is_(False))
        assert_that(calling(ClassOfService).with_args(cos_id=u'c', qos=QosDescriptor(),
                                                      capacity=0),
                    raises(TooSmall))
        assert_that(calling(ClassOfService).with_args(cos_id=u'c', qos=QosDescriptor(),
                                                      pricing=object()),
                    raises(TypeError))
        ext = to_external_object(cos)
        assert_that(ext, has_entry('pricing', has_entry('kind', 'accept_all')))

    def test_benefit_point(self):
        assert_that(calling(BenefitPoint).with_args(float('nan'), 1.0),
                    raises(ConstraintNotSatisfied))
        assert_that(calling(BenefitPoint).with_args(float('inf'), 1.0),
                    raises(ConstraintNotSatisfied))

    def test_grid_region(self):
        assert_that(GridRegion(MUTUAL).region, is_(MUTUAL))
        assert_that(GridRegion(MUTUAL).is_neither, is_(False))
        assert_that(calling(GridRegion).with_args(u'Elsewhere'),
                    raises(ValueError))
        assert_that(ClassOfService(cos_id=u'c', qos=QosDescriptor()).alert,
                    is_(False))
        assert_that(QosDescriptor().latency_s, is_(none()))
