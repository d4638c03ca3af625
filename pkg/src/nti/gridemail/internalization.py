#!/usr/bin/env python
# -*- coding: utf-8 -*
"""
Loading gridemail objects from their JSON documents.

Unknown keys are rejected, and every value goes through the schema of
the object it configures.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import codecs

import simplejson

from zope import interface

from zope.schema import ValidationError

from nti.gridemail.catalog import Catalog

from nti.gridemail.interfaces import IMessageMeta
from nti.gridemail.interfaces import IQosDescriptor
from nti.gridemail.interfaces import ISenderProfile
from nti.gridemail.interfaces import IScoringConfig

from nti.gridemail.model import MessageMeta
from nti.gridemail.model import QosDescriptor
from nti.gridemail.model import ScoringConfig
from nti.gridemail.model import SenderProfile
from nti.gridemail.model import ClassOfService

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.policies.interfaces import IPricingPolicyConfig

#: Keys added by externalization that loaders ignore
EXTERNAL_KEYS = frozenset(('Class', 'MimeType'))

COS_KEYS = frozenset(('cos_id', 'qos', 'pricing', 'trusted_senders',
                      'capacity', 'alert'))

logger = __import__('logging').getLogger(__name__)


class ConfigurationError(ValueError):
    """
    A configuration document is malformed or fails validation.
    """

    def __init__(self, message, where=None):
        if where:
            message = '%s: %s' % (where, message)
        super(ConfigurationError, self).__init__(message)
        self.where = where


def _fields(iface):
    return frozenset(name for name in iface.names(all=True)
                     if hasattr(iface[name], 'validate'))


def check_keys(ext, allowed, where):
    if not isinstance(ext, dict):
        raise ConfigurationError("expected an object", where)
    unknown = set(ext) - set(allowed) - EXTERNAL_KEYS
    if unknown:
        raise ConfigurationError("unknown keys %s" % sorted(unknown), where)
    return {k: v for k, v in ext.items() if k not in EXTERNAL_KEYS}


def check_required(iface, kwargs, where):
    """
    Reject documents lacking a required field that has no default.
    """
    missing = sorted(name for name in _fields(iface)
                     if iface[name].required
                     and iface[name].default is None
                     and kwargs.get(name) is None)
    if missing:
        raise ConfigurationError("missing keys %s" % missing, where)
    return kwargs


def construct(factory, kwargs, where):
    try:
        return factory(**kwargs)
    except ValidationError as e:
        field = getattr(e, 'field', None)
        name = getattr(field, '__name__', None) or ''
        raise ConfigurationError("invalid %s %s" % (name, e.__class__.__name__),
                                 where)
    except (interface.Invalid, TypeError, ValueError) as e:
        raise ConfigurationError(str(e), where)


def _sets(kwargs, *names):
    for name in names:
        if kwargs.get(name) is not None:
            kwargs[name] = frozenset(kwargs[name])
    return kwargs


def qos_from_external(ext, where=u'qos'):
    kwargs = check_keys(ext, _fields(IQosDescriptor), where)
    _sets(kwargs, 'flexibility', 'recipient_properties')
    return construct(QosDescriptor, kwargs, where)


def pricing_from_external(ext, where=u'pricing'):
    kwargs = check_keys(ext, IPricingPolicyConfig.names(), where)
    return construct(PricingPolicyConfig, kwargs, where)


def cos_from_external(ext, where=u'class'):
    kwargs = check_keys(ext, COS_KEYS, where)
    where = '%s %s' % (where, kwargs.get('cos_id', ''))
    if 'qos' not in kwargs:
        raise ConfigurationError("missing qos", where)
    kwargs['qos'] = qos_from_external(kwargs['qos'], where + ' qos')
    if 'pricing' in kwargs:
        kwargs['pricing'] = pricing_from_external(kwargs['pricing'],
                                                  where + ' pricing')
    _sets(kwargs, 'trusted_senders')
    return construct(ClassOfService, kwargs, where)


def catalog_from_external(ext):
    """
    A :class:`~.Catalog` from either a list of classes or an object with
    a ``classes`` list.
    """
    if isinstance(ext, dict):
        ext = check_keys(ext, ('classes',), 'catalog').get('classes', ())
    if not isinstance(ext, (list, tuple)):
        raise ConfigurationError("expected a list of classes", 'catalog')
    classes = [cos_from_external(item, 'class %d' % i)
               for i, item in enumerate(ext)]
    try:
        return Catalog(classes)
    except ValueError as e:
        raise ConfigurationError(str(e), 'catalog')


def scoring_from_external(ext, where=u'scoring'):
    kwargs = check_keys(ext, _fields(IScoringConfig), where)
    _sets(kwargs, 'reply_stamps')
    return construct(ScoringConfig, kwargs, where)


def profile_from_external(ext, where=u'profile'):
    kwargs = check_keys(ext, _fields(ISenderProfile), where)
    if kwargs.get('required_qos') is not None:
        kwargs['required_qos'] = qos_from_external(kwargs['required_qos'],
                                                   where + ' required_qos')
    return construct(SenderProfile, kwargs, where)


def meta_from_external(ext, where=u'message'):
    kwargs = check_keys(ext, _fields(IMessageMeta), where)
    return construct(MessageMeta, kwargs, where)


def load_json(path):
    try:
        with codecs.open(path, encoding='utf-8') as f:
            return simplejson.load(f)
    except (IOError, OSError) as e:
        raise ConfigurationError(e.strerror or str(e), path)
    except simplejson.JSONDecodeError as e:
        raise ConfigurationError("invalid JSON (%s)" % e, path)


def load_catalog(path):
    return catalog_from_external(load_json(path))


def load_scoring_config(path):
    return scoring_from_external(load_json(path))
