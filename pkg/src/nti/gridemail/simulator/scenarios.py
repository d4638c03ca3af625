#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Benefit scenarios: populations of messages with a sender and a receiver
benefit.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np

from zope import interface

from zope.cachedescriptors.property import Lazy

from nti.externalization.representation import WithRepr

from nti.gridemail.simulator.interfaces import MIXED
from nti.gridemail.simulator.interfaces import CORRELATED
from nti.gridemail.simulator.interfaces import RECIPIENT_SKEWED

from nti.gridemail.simulator.interfaces import IBenefitScenario
from nti.gridemail.simulator.interfaces import IScenarioComponent

from nti.gridemail.simulator.rng import standard_normals

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

#: Price grid of the pricing sweeps
DEFAULT_PRICES = tuple(float(p) for p in range(11))

DEFAULT_POPULATION = 2000

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('name', 'weight', 'sender_mean', 'sender_sd', 'coupling',
        'receiver_mean', 'receiver_sd', 'trusted_fraction')
@interface.implementer(IScenarioComponent)
class ScenarioComponent(SchemaConfigured):
    createDirectFieldProperties(IScenarioComponent)


@WithRepr
@EqHash('kind', 'components')
@interface.implementer(IBenefitScenario)
class BenefitScenario(SchemaConfigured):
    createDirectFieldProperties(IBenefitScenario)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        IBenefitScenario.validateInvariants(self)


class Population(object):
    """
    A generated population; every attribute is an array indexed by message.
    """

    def __init__(self, component, sender_benefit, receiver_benefit, trusted):
        self.component = component
        self.sender_benefit = sender_benefit
        self.receiver_benefit = receiver_benefit
        self.trusted = trusted

    def __len__(self):
        return len(self.sender_benefit)

    @Lazy
    def willingness_to_pay(self):
        return np.maximum(self.sender_benefit, 0.0)

    def sender_id(self, index):
        prefix = 'trusted' if self.trusted[index] else 'sender'
        return u'%s-%05d' % (prefix, index)

    @Lazy
    def trusted_sender_ids(self):
        return frozenset(self.sender_id(i) for i in np.flatnonzero(self.trusted))


def draw_population(scenario, size, gen):
    """
    Draw ``size`` messages from ``scenario`` with the generator ``gen``.
    """
    components = list(scenario.components)
    cumulative = np.cumsum([c.weight for c in components])
    cumulative[-1] = 1.0
    choice = np.searchsorted(cumulative, gen.random(size), side='right')
    choice = np.minimum(choice, len(components) - 1)
    sender_noise = standard_normals(gen, size)
    receiver_noise = standard_normals(gen, size)
    trust_draw = gen.random(size)

    def column(name):
        return np.array([getattr(c, name) for c in components], dtype=float)[choice]

    sender = column('sender_mean') + column('sender_sd') * sender_noise
    receiver = column('coupling') * sender \
             + column('receiver_mean') + column('receiver_sd') * receiver_noise
    trusted = trust_draw < column('trusted_fraction')
    return Population(choice, sender, receiver, trusted)


def correlated_scenario():
    """
    Receiver benefit tracks sender benefit.
    """
    return BenefitScenario(kind=CORRELATED,
                           components=(ScenarioComponent(name=u'correlated',
                                                         weight=1.0,
                                                         sender_mean=5.0,
                                                         sender_sd=3.0,
                                                         coupling=1.0,
                                                         receiver_mean=0.0,
                                                         receiver_sd=2.0),))


def recipient_skewed_scenario():
    """
    A correlated population mixed with messages senders barely value
    but receivers value highly.
    """
    return BenefitScenario(kind=RECIPIENT_SKEWED,
                           components=(ScenarioComponent(name=u'correlated',
                                                         weight=0.6,
                                                         sender_mean=5.0,
                                                         sender_sd=3.0,
                                                         coupling=1.0,
                                                         receiver_mean=0.0,
                                                         receiver_sd=2.0),
                                       ScenarioComponent(name=u'receiver',
                                                         weight=0.4,
                                                         sender_mean=1.0,
                                                         sender_sd=0.5,
                                                         coupling=0.0,
                                                         receiver_mean=12.0,
                                                         receiver_sd=2.0)))


def mixed_scenario():
    """
    One component centered in each region of the benefit grid.
    """
    return BenefitScenario(kind=MIXED,
                           components=(ScenarioComponent(name=u'ReceiverOnly',
                                                         weight=0.25,
                                                         sender_mean=-2.0,
                                                         sender_sd=1.0,
                                                         receiver_mean=40.0,
                                                         receiver_sd=8.0,
                                                         trusted_fraction=0.8),
                                       ScenarioComponent(name=u'SenderOnly',
                                                         weight=0.25,
                                                         sender_mean=20.0,
                                                         sender_sd=5.0,
                                                         receiver_mean=-10.0,
                                                         receiver_sd=5.0),
                                       ScenarioComponent(name=u'Mutual',
                                                         weight=0.3,
                                                         sender_mean=10.0,
                                                         sender_sd=3.0,
                                                         receiver_mean=30.0,
                                                         receiver_sd=6.0),
                                       ScenarioComponent(name=u'Neither',
                                                         weight=0.2,
                                                         sender_mean=-5.0,
                                                         sender_sd=2.0,
                                                         receiver_mean=-10.0,
                                                         receiver_sd=3.0)))


SCENARIOS = {
    CORRELATED: correlated_scenario,
    RECIPIENT_SKEWED: recipient_skewed_scenario,
    MIXED: mixed_scenario,
}


def get_scenario(kind):
    try:
        return SCENARIOS[kind]()
    except KeyError:
        raise ValueError("Unknown scenario %r" % (kind,))
