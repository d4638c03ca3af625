#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np

from zope import interface

from nti.externalization.externalization import to_standard_external_dictionary

from nti.externalization.representation import WithRepr

from nti.gridemail import MetaGridEmailObject

from nti.gridemail.simulator.interfaces import METRIC_NAMES

from nti.gridemail.simulator.interfaces import ISimConfig
from nti.gridemail.simulator.interfaces import ICycleMetrics
from nti.gridemail.simulator.interfaces import ISimulationResult

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('lambda_per_min', 'cycle_minutes', 'mean_read_minutes',
        'read_sd_minutes', 'mean_benefit_rate', 'benefit_rate_sd',
        'exclusive_budget_minutes', 'opportunity_rate', 'seed',
        'replications')
@interface.implementer(ISimConfig)
class SimConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(ISimConfig)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        ISimConfig.validateInvariants(self)

    @property
    def expected_arrivals(self):
        return self.lambda_per_min * self.cycle_minutes

    def replace(self, **changes):
        values = {name: getattr(self, name) for name in ISimConfig.names()}
        values.update(changes)
        return type(self)(**values)

    def toExternalObject(self, **unused_kwargs):
        result = to_standard_external_dictionary(self)
        for name in ISimConfig.names():
            result[name] = getattr(self, name)
        return result


@WithRepr
@EqHash(*METRIC_NAMES)
@interface.implementer(ICycleMetrics)
class CycleMetrics(SchemaConfigured):
    createDirectFieldProperties(ICycleMetrics)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        ICycleMetrics.validateInvariants(self)

    def as_row(self):
        return [getattr(self, name) for name in METRIC_NAMES]

    @classmethod
    def from_row(cls, row):
        return cls(**{name: float(value) for name, value in zip(METRIC_NAMES, row)})


@WithRepr
@interface.implementer(ISimulationResult)
class SimulationResult(SchemaConfigured):
    """
    The mean and standard error of each metric over the replications.
    ``samples`` holds one row of :data:`METRIC_NAMES` values per
    replication, in replication order.
    """
    createDirectFieldProperties(ISimulationResult)

    samples = None

    @property
    def net_benefit(self):
        return self.mean.net_benefit

    @property
    def net_benefit_stderr(self):
        return self.stderr['net_benefit']

    @property
    def gross_benefit(self):
        return self.mean.gross_benefit

    @property
    def gross_benefit_stderr(self):
        return self.stderr['gross_benefit']

    def __eq__(self, other):
        try:
            return self.replications == other.replications \
               and np.array_equal(self.samples, other.samples)
        except AttributeError:  # pragma: no cover
            return NotImplemented

    __hash__ = None


def summarize(samples):
    """
    Summarize a replications x metrics array.
    """
    samples = np.asarray(samples, dtype=float)
    replications = samples.shape[0]
    means = samples.mean(axis=0)
    if replications > 1:
        errors = samples.std(axis=0, ddof=1) / np.sqrt(replications)
    else:
        errors = np.zeros(len(METRIC_NAMES))
    result = SimulationResult(replications=replications,
                              mean=CycleMetrics.from_row(means),
                              stderr={name: float(e) for name, e in zip(METRIC_NAMES, errors)})
    result.samples = samples
    return result
