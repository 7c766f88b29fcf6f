# coding=utf-8
"""Report tables and their writers (aligned text, CSV and workbook)."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

from ._table import NOT_AVAILABLE, Table, read_csv_table
from ._writer_base import ReportWriterBase, format_value
from .ToText import ToText, render_text
from .ToCsv import ToCsv
from .ToWorkbook import ToWorkbook


def write_report(table, output_dir):
    """Write a table as aligned text and as its CSV twin; returns both paths."""
    return ToText().table(table, output_dir), ToCsv().table(table, output_dir)
