#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Single-use payment tokens.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os
import secrets
import threading

from BTrees.OOBTree import OOBTree

from zope import interface

from zope import event as zope_event

from nti.externalization.representation import WithRepr

from nti.gridemail.services.interfaces import ISSUED
from nti.gridemail.services.interfaces import REDEEMED
from nti.gridemail.services.interfaces import REFUNDED

from nti.gridemail.services.interfaces import PaymentError
from nti.gridemail.services.interfaces import InvalidAmount
from nti.gridemail.services.interfaces import InvalidRefund
from nti.gridemail.services.interfaces import DuplicateToken

from nti.gridemail.services.interfaces import ITokenRecord

from nti.gridemail.services.interfaces import TokenEvent

from nti.gridemail.services.journal import Journal

from nti.gridemail.protocol.interfaces import IPaymentService

from nti.schema.fieldproperty import createDirectFieldProperties

from nti.schema.schema import SchemaConfigured

#: Bytes of randomness in a token
TOKEN_BYTES = 16

logger = __import__('logging').getLogger(__name__)


@WithRepr
@interface.implementer(ITokenRecord)
class TokenRecord(SchemaConfigured):
    createDirectFieldProperties(ITokenRecord)


@interface.implementer(IPaymentService)
class TokenLedger(object):
    """
    Tokens by value. Every state change is a single step under the
    ledger lock, so a token is redeemed at most once however many
    sessions present it.

    :param str path: Optional JSON-lines file recording every change;
        replayed when the ledger is opened.
    """

    def __init__(self, path=None):
        self._lock = threading.RLock()
        self._tokens = OOBTree()
        self._journal = None
        if path:
            directory = os.path.dirname(path)
            if directory and not os.path.isdir(directory):
                os.makedirs(directory)
            self._journal = Journal(path)
            self._replay()

    def _replay(self):
        for record in self._journal.records():
            token = record['token']
            if record['state'] == ISSUED:
                self._tokens[token] = TokenRecord(token=token,
                                                  amount=record['amount'],
                                                  payer=record['payer'])
            else:
                entry = self._tokens[token]
                entry.state = record['state']
                entry.payee = record.get('payee') or entry.payee
        logger.info("Replayed %d tokens", len(self._tokens))

    def _record(self, entry, state):
        if self._journal is not None:
            self._journal.append({'token': entry.token,
                                  'state': state,
                                  'amount': entry.amount,
                                  'payer': entry.payer,
                                  'payee': entry.payee})
        entry.state = state
        zope_event.notify(TokenEvent(entry, state))

    def __len__(self):
        return len(self._tokens)

    def __contains__(self, token):
        return token in self._tokens

    def get(self, token):
        return self._tokens.get(token)

    def issue_token(self, payer, amount):
        amount = float(amount)
        if not amount > 0:
            raise InvalidAmount("Token amount must be positive, got %s" % amount)
        with self._lock:
            token = secrets.token_hex(TOKEN_BYTES)
            while token in self._tokens:  # pragma: no cover
                token = secrets.token_hex(TOKEN_BYTES)
            entry = TokenRecord(token=token, amount=amount, payer=payer)
            self._record(entry, ISSUED)
            self._tokens[token] = entry
        logger.info("Issued token of %s to %s", amount, payer)
        return token

    def verify_and_redeem(self, token, required_amount, payee):
        """
        Redeem ``token`` for ``payee`` if it is issued and worth at least
        ``required_amount``.

        :return: The token's amount.
        """
        with self._lock:
            entry = self._tokens.get(token)
            if entry is None:
                raise PaymentError("Unknown token")
            if entry.state != ISSUED:
                raise DuplicateToken("Token already %s" % entry.state)
            if entry.amount < required_amount:
                raise PaymentError("Token worth %s, %s required"
                                   % (entry.amount, required_amount))
            entry.payee = payee
            self._record(entry, REDEEMED)
        logger.info("Redeemed token of %s for %s", entry.amount, payee)
        return entry.amount

    def refund(self, token):
        with self._lock:
            entry = self._tokens.get(token)
            if entry is None or entry.state != REDEEMED:
                state = entry.state if entry is not None else None
                raise InvalidRefund("Cannot refund a token in state %s" % state)
            self._record(entry, REFUNDED)
        logger.info("Refunded token of %s to %s", entry.amount, entry.payer)

    def counts(self):
        """
        The number of tokens in each state.
        """
        result = {ISSUED: 0, REDEEMED: 0, REFUNDED: 0}
        with self._lock:
            for entry in self._tokens.values():
                result[entry.state] += 1
        return result
