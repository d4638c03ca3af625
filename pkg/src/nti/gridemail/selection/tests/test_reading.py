#!/usr/bin/env python
# -*- coding: utf-8 -*-

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=protected-access,too-many-public-methods

from hamcrest import is_
from hamcrest import raises
from hamcrest import calling
from hamcrest import close_to
from hamcrest import has_length
from hamcrest import assert_that
from hamcrest import greater_than_or_equal_to

from nti.testing.matchers import validly_provides

import os
import random
import shutil
import tempfile
import unittest

from zope import interface

from nti.gridemail.selection.interfaces import IReadingTimeModel

from nti.gridemail.selection.reading import ReadObservation
from nti.gridemail.selection.reading import ReadingTimeModel

from nti.gridemail.selection.reading import fit_reading_time
from nti.gridemail.selection.reading import load_observations
from nti.gridemail.selection.reading import predict_read_time


def _obs(sender, size, minutes):
    return ReadObservation(sender_id=sender, size_bytes=size, minutes=minutes)


class TestReading(unittest.TestCase):

    def test_empty(self):
        model = fit_reading_time([])
        assert_that(model, validly_provides(IReadingTimeModel))
        assert_that(model.fallback, is_(True))
        assert_that(predict_read_time(model, u'anyone', 123456), is_((3.0, 1.0)))
        model = fit_reading_time([_obs(u'a', 1, 1.0)], prior_variance=2.5)
        assert_that(predict_read_time(model, u'a', 1), is_((3.0, 2.5)))

    def test_exact_line(self):
        model = fit_reading_time([_obs(u'a', 1, 2.0),
                                  _obs(u'a', 2, 3.0),
                                  _obs(u'a', 3, 4.0)])
        assert_that(model.slope, close_to(1.0, 1e-9))
        assert_that(model.intercept, close_to(1.0, 1e-9))
        assert_that(model.residual_variance, close_to(0.0, 1e-12))
        mean, _ = predict_read_time(model, u'a', 5)
        assert_that(mean, close_to(6.0, 1e-9))

    def test_equal_sizes(self):
        model = fit_reading_time([_obs(u'a', 10, 2.0),
                                  _obs(u'a', 10, 3.0),
                                  _obs(u'a', 10, 4.0)])
        assert_that(model.intercept, close_to(3.0, 1e-12))
        assert_that(model.slope, is_(0.0))
        assert_that(model.residual_variance, close_to(1.0, 1e-12))

    def test_zero_noise_recovery(self):
        rng = random.Random(17)
        obs = [_obs(u'a', size, 0.75 + 0.002 * size)
               for size in (rng.randint(0, 20000) for _ in range(50))]
        model = fit_reading_time(obs)
        assert_that(model.slope, close_to(0.002, 1e-9))
        assert_that(model.intercept, close_to(0.75, 1e-9))

    def test_sender_offsets(self):
        obs = []
        for size in (100, 200, 300, 400):
            obs.append(_obs(u'slow', size, 2.0 + 0.01 * size))
            obs.append(_obs(u'fast', size, 0.01 * size))
        model = fit_reading_time(obs)
        assert_that(model.slope, close_to(0.01, 1e-9))
        assert_that(model.offset(u'slow') - model.offset(u'fast'),
                    close_to(2.0, 1e-9))
        assert_that(model.residual_variance, close_to(0.0, 1e-12))
        slow, _ = predict_read_time(model, u'slow', 100)
        assert_that(slow, close_to(3.0, 1e-9))
        stranger, _ = predict_read_time(model, u'stranger', 100)
        assert_that(stranger, close_to(2.0, 1e-9))

    def test_clamp(self):
        model = ReadingTimeModel(intercept=1.0, slope=-1.0, residual_variance=0.0,
                                 fallback=False)
        assert_that(predict_read_time(model, u'a', 3)[0], is_(0.1))

    def test_monotone_in_size(self):
        model = ReadingTimeModel(intercept=-5.0, slope=0.01, residual_variance=0.0)
        means = [predict_read_time(model, u'a', size)[0] for size in range(0, 2000, 50)]
        for before, after in zip(means, means[1:]):
            assert_that(after, greater_than_or_equal_to(before))

    def test_invalid(self):
        assert_that(calling(ReadObservation).with_args(sender_id=u'a', size_bytes=1,
                                                       minutes=0.0),
                    raises(interface.Invalid))
        assert_that(calling(ReadingTimeModel).with_args(prior_mean=0.0),
                    raises(interface.Invalid))


class TestLoadObservations(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def _write(self, text):
        path = os.path.join(self.tmp, 'obs.csv')
        with open(path, 'w') as f:
            f.write(text)
        return path

    def test_load(self):
        path = self._write("sender_id,size_bytes,minutes\n"
                           "alice,100,2.5\n"
                           "bob,2000,4\n")
        obs = load_observations(path)
        assert_that(obs, has_length(2))
        assert_that(obs[1], is_(_obs(u'bob', 2000, 4.0)))

    def test_bad_header(self):
        path = self._write("who,size,time\nalice,1,2\n")
        assert_that(calling(load_observations).with_args(path),
                    raises(ValueError))
