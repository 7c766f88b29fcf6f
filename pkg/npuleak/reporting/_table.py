# coding=utf-8
"""A report table: a name, column headers and rows of plain values."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import collections
import csv
import io

# Third-party imports
import numpy as np

from pathlib2 import Path


class Table(collections.namedtuple("Table", ["name", "columns", "rows", "title"])):
    """Rows of plain values; None becomes NA."""
    __slots__ = ()

    def __new__(cls, name, columns, rows, title=None):
        columns = tuple(columns)
        rows = [tuple(_plain(v) for v in row) for row in rows]
        for row in rows:
            if len(row) != len(columns):
                raise ValueError("Row {0} of table '{1}' does not have {2} values".format(row, name, len(columns)))
        return super(Table, cls).__new__(cls, name, columns, rows, title)

    def column(self, name):
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


NOT_AVAILABLE = "NA"


def _plain(value):
    if value is None:
        return NOT_AVAILABLE
    if isinstance(value, np.generic):
        return value.item()
    return value


def _parse(text):
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def read_csv_table(path):
    """Read a CSV report back into a Table named after the file."""
    path = Path(str(path))
    with io.open(str(path), "r", newline="", encoding="utf-8") as csvfile:
        reader = csv.reader(csvfile, dialect="excel")
        rows = list(reader)
    if not rows:
        raise ValueError("{0} is empty".format(path))
    return Table(path.stem, rows[0], [[_parse(v) for v in row] for row in rows[1:]])
