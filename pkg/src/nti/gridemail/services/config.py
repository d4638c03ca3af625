#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Daemon and client configuration documents.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os

from zope import interface

from nti.externalization.representation import WithRepr

from nti.gridemail import GRIDEMAIL_CONFIG

from nti.gridemail import MetaGridEmailObject

from nti.gridemail.internalization import ConfigurationError

from nti.gridemail.internalization import load_json
from nti.gridemail.internalization import construct
from nti.gridemail.internalization import check_keys
from nti.gridemail.internalization import check_required

from nti.gridemail.services.interfaces import IAddress
from nti.gridemail.services.interfaces import IRetryPolicy
from nti.gridemail.services.interfaces import IClientConfig
from nti.gridemail.services.interfaces import ISenderConfig
from nti.gridemail.services.interfaces import IPaymentConfig
from nti.gridemail.services.interfaces import IIdentityConfig
from nti.gridemail.services.interfaces import IReceiverConfig
from nti.gridemail.services.interfaces import IAlertSinkConfig

from nti.schema.eqhash import EqHash

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

logger = __import__('logging').getLogger(__name__)


@WithRepr
@EqHash('host', 'port')
@interface.implementer(IAddress)
class Address(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IAddress)

    def as_tuple(self):
        return (self.host, self.port)

    def __str__(self):
        return '%s:%s' % (self.host, self.port)


def parse_address(value, where=u'address'):
    """
    An :class:`Address` from ``"host:port"``, ``{"host":..,"port":..}``
    or an existing address.
    """
    if IAddress.providedBy(value):
        return value
    if isinstance(value, str):
        host, sep, port = value.rpartition(':')
        if not sep or not port.isdigit():
            raise ConfigurationError("expected host:port, got %r" % value, where)
        return construct(Address, {'host': host or u'127.0.0.1',
                                   'port': int(port)}, where)
    kwargs = check_keys(value, IAddress.names(), where)
    return construct(Address, kwargs, where)


@WithRepr
@EqHash('kind', 'path', 'address', 'attempts')
@interface.implementer(IAlertSinkConfig)
class AlertSinkConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IAlertSinkConfig)

    def __init__(self, *args, **kwargs):
        SchemaConfigured.__init__(self, *args, **kwargs)
        IAlertSinkConfig.validateInvariants(self)


@WithRepr
@EqHash('attempts', 'backoff_s', 'retry_codes')
@interface.implementer(IRetryPolicy)
class RetryPolicy(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IRetryPolicy)

    def delay(self, attempt):
        """
        Seconds to wait after failed attempt number ``attempt`` (from 0).
        """
        return self.backoff_s * (2 ** attempt)


@WithRepr
@interface.implementer(IReceiverConfig)
class ReceiverConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IReceiverConfig)


@WithRepr
@interface.implementer(ISenderConfig)
class SenderConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(ISenderConfig)


@WithRepr
@interface.implementer(IPaymentConfig)
class PaymentConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IPaymentConfig)


@WithRepr
@interface.implementer(IIdentityConfig)
class IdentityConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IIdentityConfig)


@WithRepr
@interface.implementer(IClientConfig)
class ClientConfig(SchemaConfigured, metaclass=MetaGridEmailObject):
    createDirectFieldProperties(IClientConfig)


def sink_from_external(ext, where=u'alerts'):
    kwargs = check_keys(ext, IAlertSinkConfig.names(), where)
    if kwargs.get('address') is not None:
        kwargs['address'] = parse_address(kwargs['address'], where + ' address')
    return construct(AlertSinkConfig, kwargs, where)


def retry_from_external(ext, where=u'retry'):
    kwargs = check_keys(ext, IRetryPolicy.names(), where)
    if kwargs.get('retry_codes') is not None:
        kwargs['retry_codes'] = tuple(kwargs['retry_codes'])
    return construct(RetryPolicy, kwargs, where)


_NESTED = {
    'listen': parse_address,
    'payment': parse_address,
    'identity': parse_address,
    'receiver': parse_address,
    'sender': parse_address,
    'alerts': sink_from_external,
    'retry': retry_from_external,
}


def _config_from_external(factory, iface, ext, where):
    kwargs = check_keys(ext, iface.names(), where)
    for name, loader in _NESTED.items():
        if kwargs.get(name) is not None and name in iface:
            kwargs[name] = loader(kwargs[name], '%s %s' % (where, name))
    check_required(iface, kwargs, where)
    return construct(factory, kwargs, where)


CONFIG_FACTORIES = {
    'receiver': (ReceiverConfig, IReceiverConfig),
    'sender': (SenderConfig, ISenderConfig),
    'payment': (PaymentConfig, IPaymentConfig),
    'identity': (IdentityConfig, IIdentityConfig),
    'client': (ClientConfig, IClientConfig),
}


def config_from_external(kind, ext, where=None):
    try:
        factory, iface = CONFIG_FACTORIES[kind]
    except KeyError:
        raise ConfigurationError("unknown configuration kind %r" % (kind,))
    return _config_from_external(factory, iface, ext, where or kind)


def config_path(path=None):
    """
    ``path``, or the document named by the ``GRIDEMAIL_CONFIG``
    environment variable.
    """
    path = path or os.environ.get(GRIDEMAIL_CONFIG)
    if not path:
        raise ConfigurationError("no configuration given and %s is unset"
                                 % GRIDEMAIL_CONFIG)
    return path


def load_config(kind, path=None):
    path = config_path(path)
    return config_from_external(kind, load_json(path), path)


def resolve(base_path, path):
    """
    ``path`` relative to the directory of the document at ``base_path``.
    """
    if not path or os.path.isabs(path) or not base_path:
        return path
    return os.path.join(os.path.dirname(os.path.abspath(base_path)), path)
