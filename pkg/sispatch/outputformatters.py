# -*- coding: utf-8 -*-
"""
Output formatting of analysis results to CSV abstracted in this file.
Every table carries '#' comment lines with its provenance ahead of
the header row; the body depends only on the inputs.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
import math
import sys

import numpy as np
import pandas as pd

from . import settings

log = logging.getLogger(__name__)


class ResultTable(object):

    def __init__(self, columns, rows, provenance=None, nullable=()):
        """Rows are sequences matching `columns`. Numeric cells may be NaN
        (or None) only in the columns named in `nullable`.
        """
        self.columns = list(columns)
        self.rows = [list(row) for row in rows]
        self.provenance = dict(provenance or {})
        self.nullable = set(nullable)
        self.validate()

    def validate(self):
        width = len(self.columns)
        if len(set(self.columns)) != width:
            raise ValueError('duplicate column names in %s' % self.columns)
        unknown = self.nullable - set(self.columns)
        if unknown:
            raise ValueError('nullable columns %s are not in the table'
                             % sorted(unknown))
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError('row %d has %d cells, expected %d'
                                 % (i, len(row), width))
            for name, cell in zip(self.columns, row):
                if name in self.nullable:
                    continue
                if cell is None or (isinstance(cell, float)
                                    and math.isnan(cell)):
                    raise ValueError('undefined value in column %r, row %d'
                                     % (name, i))

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        """Returns the column `name` as a list, None becoming NaN
        """
        k = self.columns.index(name)
        return [math.nan if row[k] is None else row[k] for row in self.rows]

    def to_frame(self):
        body = [[math.nan if cell is None else cell for cell in row]
                for row in self.rows]
        return pd.DataFrame(body, columns=self.columns)

    def header_lines(self):
        return ['%s %s: %s' % (settings.CSV_COMMENT, key, value)
                for key, value in self.provenance.items()]

    def body(self):
        """Returns the header row plus data rows as one string
        """
        return self.to_frame().to_csv(
            index=False, sep=settings.CSV_SEPARATOR,
            float_format=settings.CSV_FLOAT_FORMAT,
            na_rep=settings.CSV_NA_REP,
            lineterminator=settings.CSV_LINE_TERMINATOR)

    def to_csv(self):
        lines = self.header_lines()
        prefix = settings.CSV_LINE_TERMINATOR.join(lines)
        if prefix:
            prefix += settings.CSV_LINE_TERMINATOR
        return prefix + self.body()

    def write(self, path=None):
        """Writes the CSV text to `path`, or to stdout when path is None
        or '-'
        """
        text = self.to_csv()
        if path is None or path == '-':
            sys.stdout.write(text)
        else:
            with open(path, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
            log.info('wrote %d rows to %s', len(self), path)


def read_table(path_or_buffer):
    """Reads a CSV written by ResultTable back into a DataFrame,
    skipping the provenance lines
    """
    return pd.read_csv(path_or_buffer, comment=settings.CSV_COMMENT,
                       float_precision='round_trip')


def vector_columns(prefix, n):
    return ['%s_%d' % (prefix, j + 1) for j in range(n)]


def cells(values):
    """Float cells of a vector, None for NaN
    """
    return [None if math.isnan(v) else float(v)
            for v in np.asarray(values, dtype=float)]
