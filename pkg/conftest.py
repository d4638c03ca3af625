# -*- coding: utf-8 -*-
"""
Honor zope.testrunner ``layer`` attributes when collecting with pytest.
"""

import pytest


def _layer_chain(layer, seen=None):
    # Base layers first, as zope.testrunner orders them.
    seen = [] if seen is None else seen
    for base in getattr(layer, '__bases__', ()):
        if base is not object:
            _layer_chain(base, seen)
    if layer not in seen:
        seen.append(layer)
    return seen


def _own(layer, name):
    return layer.__dict__.get(name)


@pytest.fixture(autouse=True, scope='class')
def _zope_layer(request):
    layer = getattr(request.cls, 'layer', None) if request.cls else None
    if layer is None:
        yield None
        return
    chain = _layer_chain(layer)
    done = []
    try:
        for l in chain:
            meth = _own(l, 'setUp')
            if meth is not None:
                meth.__get__(None, l)()
            done.append(l)
        yield layer
    finally:
        for l in reversed(done):
            meth = _own(l, 'tearDown')
            if meth is not None:
                meth.__get__(None, l)()


@pytest.fixture(autouse=True)
def _zope_layer_test(request, _zope_layer):
    if _zope_layer is None:
        yield
        return
    chain = _layer_chain(_zope_layer)
    for l in chain:
        meth = _own(l, 'testSetUp')
        if meth is not None:
            meth.__get__(None, l)()
    yield
    for l in reversed(chain):
        meth = _own(l, 'testTearDown')
        if meth is not None:
            meth.__get__(None, l)()
