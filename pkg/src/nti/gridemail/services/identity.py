#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Sender authentication by shared secret.

A sender's authenticator is the hex HMAC-SHA256, keyed with its
registered secret, of the hex SHA-256 digest of the message body.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import hmac
import hashlib
import threading

from zope import interface

from nti.gridemail.protocol.interfaces import IIdentityService

from nti.gridemail.services.interfaces import IdentityError

logger = __import__('logging').getLogger(__name__)


def _bytes(value):
    return value.encode('utf-8') if isinstance(value, str) else value


def compute_authenticator(secret, digest):
    return hmac.new(_bytes(secret), _bytes(digest), hashlib.sha256).hexdigest()


@interface.implementer(IIdentityService)
class IdentityRegistry(object):

    def __init__(self, secrets=None):
        self._lock = threading.Lock()
        self._secrets = {}
        for sender_id, secret in (secrets or {}).items():
            self.register(sender_id, secret)

    def register(self, sender_id, secret):
        if not secret:
            raise ValueError("Empty secret for %s" % sender_id)
        with self._lock:
            self._secrets[sender_id] = secret

    def __contains__(self, sender_id):
        return sender_id in self._secrets

    def authenticator(self, sender_id, digest):
        """
        The authenticator ``sender_id`` should present for ``digest``.
        """
        try:
            return compute_authenticator(self._secrets[sender_id], digest)
        except KeyError:
            raise IdentityError("Unknown sender %s" % sender_id)

    def check_identity(self, sender_id, digest, authenticator):
        expected = self.authenticator(sender_id, digest)
        if not hmac.compare_digest(_bytes(expected), _bytes(authenticator or u'')):
            logger.warning("Bad authenticator from %s", sender_id)
            raise IdentityError("Bad authenticator from %s" % sender_id)
        return True
