#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Random streams of the simulator.

Every stream is a PCG64 generator keyed by a numpy ``SeedSequence`` of
the run seed and a spawn key, so replication ``i`` of seed ``s`` draws
the same numbers regardless of which process runs it. Poisson counts use
inversion and normals use Box-Muller, both on the generator's uniforms,
so results do not depend on numpy's own samplers.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import math

import numpy as np

#: Spawn key prefixes
REPLICATION_STREAM = 0
POPULATION_STREAM = 1

#: Largest Poisson mean drawn in one inversion
POISSON_CHUNK = 500.0

logger = __import__('logging').getLogger(__name__)


def generator(seed, *spawn_key):
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(spawn_key))
    return np.random.Generator(np.random.PCG64(sequence))


def replication_generator(seed, replication):
    return generator(seed, REPLICATION_STREAM, replication)


def population_generator(seed):
    return generator(seed, POPULATION_STREAM)


def _poisson_inversion(gen, mean):
    u = gen.random()
    term = math.exp(-mean)
    cumulative = term
    k = 0
    # the cumulative sum stalls just below 1 far in the tail
    limit = mean + 40.0 * math.sqrt(mean) + 40.0
    while u > cumulative and k < limit:
        k += 1
        term *= mean / k
        cumulative += term
    return k


def poisson(gen, mean):
    """
    A Poisson count by inversion. Means above :data:`POISSON_CHUNK` are
    split into a sum of smaller independent counts.
    """
    if mean < 0 or not math.isfinite(mean):
        raise ValueError("Poisson mean must be finite and nonnegative")
    if mean == 0:
        return 0
    count = 0
    while mean > POISSON_CHUNK:
        count += _poisson_inversion(gen, POISSON_CHUNK)
        mean -= POISSON_CHUNK
    return count + _poisson_inversion(gen, mean)


def standard_normals(gen, size):
    """
    ``size`` standard normal draws by the Box-Muller transform.
    """
    if size <= 0:
        return np.zeros(0)
    pairs = (size + 1) // 2
    u1 = 1.0 - gen.random(pairs)  # in (0, 1]
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate((radius * np.cos(angle), radius * np.sin(angle)))[:size]


def normals(gen, size, mean, sd):
    return mean + sd * standard_normals(gen, size)
