#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Result tables as CSV or JSON.

Floats are written with ``repr`` so a table reads back to the exact
values; missing values are empty cells.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import csv
import io

import simplejson

from nti.gridemail.simulator.interfaces import METRIC_NAMES

#: Output formats
CSV_FORMAT = u'csv'
JSON_FORMAT = u'json'
TABLE_FORMATS = (CSV_FORMAT, JSON_FORMAT)

#: Columns of a single simulation
SIMULATION_COLUMNS = ('policy', 'lambda', 'replications') + \
    tuple(name for name in METRIC_NAMES) + \
    tuple(name + '_stderr' for name in METRIC_NAMES)

logger = __import__('logging').getLogger(__name__)


def format_cell(value):
    if value is None:
        return u''
    if isinstance(value, bool):
        return u'true' if value else u'false'
    if isinstance(value, float):
        return repr(value)
    return u'%s' % (value,)


def simulation_row(policy, cfg, result):
    row = {'policy': policy, 'lambda': cfg.lambda_per_min,
           'replications': result.replications}
    for name in METRIC_NAMES:
        row[name] = float(getattr(result.mean, name))
        row[name + '_stderr'] = result.stderr[name]
    return row


def write_csv(rows, columns, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(name)) for name in columns])


def write_json(rows, columns, stream):
    data = [{name: row.get(name) for name in columns} for row in rows]
    simplejson.dump(data, stream, indent=2, sort_keys=True)
    stream.write(u'\n')


def write_table(rows, columns, stream, fmt=CSV_FORMAT):
    if fmt == CSV_FORMAT:
        write_csv(rows, columns, stream)
    elif fmt == JSON_FORMAT:
        write_json(rows, columns, stream)
    else:
        raise ValueError("Unknown table format %r" % (fmt,))


def render_table(rows, columns, fmt=CSV_FORMAT):
    stream = io.StringIO()
    write_table(rows, columns, stream, fmt)
    return stream.getvalue()


def read_csv(stream):
    """
    Rows of a CSV table as dictionaries of strings.
    """
    return list(csv.DictReader(stream))
