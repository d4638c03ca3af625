#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import has_entries
from hamcrest import assert_that

from nti.testing.matchers import validly_provides

import unittest

from nti.gridemail.interfaces import IAdmissionScore

from nti.gridemail.model import MessageMeta
from nti.gridemail.model import ScoringConfig

from nti.gridemail.scoring import score_message


def _meta(sender_id=u'alice', format_tag=u'plain', stamp=None):
    return MessageMeta(id=u'm1', sender_id=sender_id, format_tag=format_tag,
                       stamp=stamp)


class TestScoring(unittest.TestCase):

    cfg = ScoringConfig(source_points={u'friend': 50, u'partner': 20},
                        stamp_points=40,
                        format_points={u'ical': 10},
                        category_of={u'alice': u'friend', u'bob': u'partner'},
                        reply_stamps=frozenset((u's1',)))

    def test_no_rule_matches(self):
        score = score_message(_meta(u'mallory'), self.cfg, False)
        assert_that(score, validly_provides(IAdmissionScore))
        assert_that(score.total, is_(0.0))

    def test_single_rule(self):
        score = score_message(_meta(), self.cfg, False)
        assert_that(score.total, is_(50.0))

    def test_composition(self):
        meta = _meta(format_tag=u'ical', stamp=u's1')
        score = score_message(meta, self.cfg, self.cfg.stamp_is_valid(meta.stamp))
        assert_that(score.total, is_(100.0))
        assert_that(score.components,
                    has_entries(u'source', 50.0, u'stamp', 40.0, u'format', 10.0))

    def test_additive(self):
        meta = _meta(u'bob', u'ical', u's1')
        whole = score_message(meta, self.cfg, True).total
        parts = [score_message(meta, ScoringConfig(source_points=self.cfg.source_points,
                                                   category_of=self.cfg.category_of),
                               False).total,
                 score_message(meta, ScoringConfig(stamp_points=40), True).total,
                 score_message(meta, ScoringConfig(format_points={u'ical': 10}),
                               False).total]
        assert_that(whole, is_(sum(parts)))
        assert_that(whole, is_(70.0))

    def test_stamp_validity(self):
        assert_that(self.cfg.stamp_is_valid(u's1'), is_(True))
        assert_that(self.cfg.stamp_is_valid(u's2'), is_(False))
        assert_that(self.cfg.stamp_is_valid(None), is_(False))
        assert_that(ScoringConfig().stamp_is_valid(u's1'), is_(False))
