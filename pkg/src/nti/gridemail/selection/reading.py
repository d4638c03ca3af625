#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Fitting and using reading time models.

The fit is two-stage: ordinary least squares of minutes on size, then
each sender's offset is the mean residual of its observations.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import csv
import codecs

from collections import defaultdict

import numpy as np

from zope import interface

from nti.externalization.representation import WithRepr

from nti.gridemail.selection.interfaces import MIN_OBSERVATIONS
from nti.gridemail.selection.interfaces import DEFAULT_PRIOR_MEAN
from nti.gridemail.selection.interfaces import MIN_PREDICTED_MINUTES
from nti.gridemail.selection.interfaces import DEFAULT_PRIOR_VARIANCE

from nti.gridemail.selection.interfaces import IReadObservation
from nti.gridemail.selection.interfaces import IReadingTimeModel

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

OBSERVATION_HEADER = ('sender_id', 'size_bytes', 'minutes')

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('sender_id', 'size_bytes', 'minutes')
@interface.implementer(IReadObservation)
class ReadObservation(SchemaConfigured):
    createDirectFieldProperties(IReadObservation)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        IReadObservation.validateInvariants(self)


@WithRepr
@EqHash('intercept', 'slope', 'residual_variance', 'per_sender_offset',
        'prior_mean', 'prior_variance', 'fallback')
@interface.implementer(IReadingTimeModel)
class ReadingTimeModel(SchemaConfigured):
    createDirectFieldProperties(IReadingTimeModel)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        IReadingTimeModel.validateInvariants(self)

    def offset(self, sender_id):
        return (self.per_sender_offset or {}).get(sender_id, 0.0)


def prior_model(prior_mean=DEFAULT_PRIOR_MEAN,
                prior_variance=DEFAULT_PRIOR_VARIANCE):
    return ReadingTimeModel(intercept=prior_mean,
                            slope=0.0,
                            residual_variance=prior_variance,
                            prior_mean=prior_mean,
                            prior_variance=prior_variance,
                            fallback=True)


def fit_reading_time(observations, prior_mean=DEFAULT_PRIOR_MEAN,
                     prior_variance=DEFAULT_PRIOR_VARIANCE):
    """
    Fit a :class:`ReadingTimeModel`. With too few observations the
    prior is returned.
    """
    observations = list(observations)
    if len(observations) < MIN_OBSERVATIONS:
        logger.debug("%d observations; using the prior", len(observations))
        return prior_model(prior_mean, prior_variance)

    sizes = np.array([o.size_bytes for o in observations], dtype=float)
    minutes = np.array([o.minutes for o in observations], dtype=float)
    if np.all(sizes == sizes[0]):
        intercept, slope = float(minutes.mean()), 0.0
        params = 1
    else:
        design = np.column_stack((np.ones_like(sizes), sizes))
        (intercept, slope), _, _, _ = np.linalg.lstsq(design, minutes, rcond=None)
        intercept, slope = float(intercept), float(slope)
        params = 2
    residuals = minutes - (intercept + slope * sizes)

    by_sender = defaultdict(list)
    for obs, residual in zip(observations, residuals):
        by_sender[obs.sender_id].append(residual)
    offsets = {}
    if len(by_sender) > 1:
        offsets = {sender: float(np.mean(values))
                   for sender, values in by_sender.items()}
        residuals = residuals - np.array([offsets[o.sender_id] for o in observations])
        params += len(by_sender) - 1

    dof = max(len(observations) - params, 1)
    variance = float(np.dot(residuals, residuals) / dof)
    return ReadingTimeModel(intercept=intercept,
                            slope=slope,
                            residual_variance=max(variance, 0.0),
                            per_sender_offset=offsets,
                            prior_mean=prior_mean,
                            prior_variance=prior_variance,
                            fallback=False)


def predict_read_time(model, sender_id=None, size_bytes=0):
    """
    The predicted (mean, variance) reading time of a message, in minutes.
    """
    mean = model.intercept + model.slope * size_bytes + model.offset(sender_id)
    return max(mean, MIN_PREDICTED_MINUTES), model.residual_variance


def load_observations(path):
    """
    Read ``sender_id,size_bytes,minutes`` rows from a CSV file with a
    header row.
    """
    result = []
    with codecs.open(path, encoding='utf-8') as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != OBSERVATION_HEADER:
            raise ValueError("Expected the header %s" % (','.join(OBSERVATION_HEADER),))
        for row in reader:
            result.append(ReadObservation(sender_id=row['sender_id'],
                                          size_bytes=int(row['size_bytes']),
                                          minutes=float(row['minutes'])))
    logger.info("Loaded %d reading observations from %s", len(result), path)
    return result
