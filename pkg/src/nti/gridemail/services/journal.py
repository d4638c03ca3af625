#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Append-only JSON-lines files backing the durable stores.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os

import simplejson

logger = __import__('logging').getLogger(__name__)


class Journal(object):
    """
    One JSON document per line. :meth:`append` returns only once the
    line is on disk.
    """

    def __init__(self, path):
        self.path = path

    def records(self):
        """
        The journaled records in order. A torn final line, whose write
        was never acknowledged, is cut off so later appends start on a
        fresh line.
        """
        if not os.path.exists(self.path):
            return
        good = 0
        torn = False
        with open(self.path, 'rb') as f:
            for number, line in enumerate(f, 1):
                if not line.endswith(b'\n'):
                    logger.warning("Ignoring partial record at %s:%s",
                                   self.path, number)
                    torn = True
                    break
                good += len(line)
                yield simplejson.loads(line.decode('utf-8'))
        if torn:
            with open(self.path, 'r+b') as f:
                f.truncate(good)

    def append(self, record):
        line = simplejson.dumps(record, sort_keys=True, separators=(',', ':'))
        with open(self.path, 'ab') as f:
            f.write(line.encode('utf-8') + b'\n')
            f.flush()
            os.fsync(f.fileno())
