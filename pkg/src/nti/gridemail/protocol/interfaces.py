#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Wire vocabulary of the sender/receiver protocol and the collaborators a
receiver session works with.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

# pylint: disable=inherit-non-class,no-self-argument,no-method-argument

from zope import interface

from nti.gridemail.interfaces import GridEmailError

#: Response codes
ACCEPTED_CODE = 250
IDENTITY_FAILED = 401
PAYMENT_INVALID = 402
COS_DENIED = 403
NOT_FOUND = 404
DUPLICATE_TOKEN = 409
CONGESTED = 429
QUEUE_FULL = 507
PROTOCOL_VIOLATION = 550

RESPONSE_CODES = (ACCEPTED_CODE, IDENTITY_FAILED, PAYMENT_INVALID,
                  COS_DENIED, NOT_FOUND, DUPLICATE_TOKEN, CONGESTED,
                  QUEUE_FULL, PROTOCOL_VIOLATION)

#: Single-token reasons carried by REJECTED
REASON_IDENTITY = u'IdentityFailed'
REASON_PAYMENT = u'PaymentRequired'
REASON_INVALID_PAYMENT = u'InvalidPayment'
REASON_UNTRUSTED = u'Untrusted'
REASON_NOT_FOUND = u'NotFound'
REASON_DUPLICATE = u'DuplicateToken'
REASON_DUPLICATE_MESSAGE = u'DuplicateMessage'
REASON_CONGESTED = u'Congested'
REASON_QUEUE_FULL = u'QueueFull'
REASON_VIOLATION = u'ProtocolViolation'

#: Delivery states answered by STATUS
STATUS_QUERY = u'QUERY'
STATUS_QUEUED = u'QUEUED'
STATUS_DELIVERED = u'DELIVERED'
STATUS_UNKNOWN = u'UNKNOWN'
STATUS_STATES = (STATUS_QUERY, STATUS_QUEUED, STATUS_DELIVERED,
                 STATUS_UNKNOWN)

#: Session states
IDLE = u'Idle'
HELLO = u'Hello'
QUOTED = u'Quoted'
PAYING = u'Paying'
SENDING = u'Sending'
DONE = u'Done'
FAILED = u'Failed'
SESSION_STATES = (IDLE, HELLO, QUOTED, PAYING, SENDING, DONE, FAILED)
TERMINAL_STATES = (DONE, FAILED)

#: Terminal outcomes reported to the sender
DELIVERED = u'Delivered'
BUDGET_EXCEEDED = u'BudgetExceeded'
NO_SUITABLE_CLASS = u'NoSuitableClass'
REJECTED = u'Rejected'
VIOLATION = u'ProtocolViolation'
FEEDBACK_OUTCOMES = (DELIVERED, BUDGET_EXCEEDED, NO_SUITABLE_CLASS,
                     REJECTED, VIOLATION)


class ProtocolViolation(GridEmailError):
    """
    A malformed or out-of-order frame.
    """
    code = PROTOCOL_VIOLATION


class IPaymentService(interface.Interface):
    """
    Single-use payment tokens.
    """

    def issue_token(payer, amount):
        """
        Issue a fresh token worth ``amount``.
        """

    def verify_and_redeem(token, required_amount, payee):
        """
        Atomically redeem ``token`` if it is issued and worth at least
        ``required_amount``; returns its amount. Raises an error carrying
        code 402 or 409 otherwise.
        """

    def refund(token):
        """
        Return a redeemed token to the payer.
        """


class IIdentityService(interface.Interface):

    def check_identity(sender_id, digest, authenticator):
        """
        Raise an error with code 401 unless ``authenticator`` is the MAC
        of ``digest`` under the secret registered for ``sender_id``.
        """


class IReceiverBackend(interface.Interface):
    """
    The recipient state shared by every receiver session.
    """

    recipient_id = interface.Attribute("The recipient this receiver serves")

    catalog = interface.Attribute("The recipient's class of service catalog")

    payment = interface.Attribute("An IPaymentService")

    identity = interface.Attribute("An IIdentityService")

    def quote(cos):
        """
        The current price and availability of ``cos``: ``(price, available)``.
        """

    def admit(cos, message, paid):
        """
        Run the admission policy of ``cos`` and queue ``message`` when it
        is accepted, as one step. Returns ``(code, reason, price)``;
        ``price`` is the required price of a payment rejection.
        """

    def fetch(cos_id, recipient_id, credential, max_n):
        """
        Oldest undelivered messages of ``cos_id``, marked delivered.
        """

    def status(message_id):
        """
        One of QUEUED, DELIVERED or UNKNOWN.
        """

    def dispatch_alert(message_id, cos_id):
        """
        Notify the recipient's alert sink. Never raises.
        """
