# coding=utf-8
"""Machine-readable CSV twins of the text reports."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import csv

# Local imports
from ._writer_base import ReportWriterBase


class ToCsv(ReportWriterBase):

    extension = ".csv"
    newline = ""

    def _table(self, table, fout):
        writer = csv.writer(fout, dialect="excel", lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
