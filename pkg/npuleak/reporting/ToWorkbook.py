# coding=utf-8
"""Office Open XML workbook of report tables, one worksheet per table."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import datetime

# Third-party imports
import xlsxwriter

from pathlib2 import Path

# Local imports
from .._atomic import atomic_path
from ._writer_base import ReportWriterBase

# fixed so that reruns produce identical workbooks
_CREATED = datetime.datetime(2000, 1, 1)
_SHEET_NAME_LIMIT = 31


class ToWorkbook(ReportWriterBase):

    extension = ".xlsx"

    #region Public overrides

    def table(self, table, output_dir, overwrite=True):
        output_path = self._default_name(table, Path(str(output_dir)))
        if output_path.exists() and not overwrite:
            raise ValueError("{0} already exists.".format(output_path))
        return self.workbook([table], output_path)

    def tables(self, tables, output_dir):
        return [self.table(t, output_dir) for t in tables]

    #endregion

    def workbook(self, tables, output_path):
        """Write all tables into one workbook at output_path."""
        output_path = Path(str(output_path))
        with atomic_path(output_path) as tmp:
            workbook = xlsxwriter.Workbook(str(tmp), {"nan_inf_to_errors": True})
            workbook.set_properties({"created": _CREATED})
            for t in tables:
                self._table(t, workbook)
            workbook.close()
        return output_path

    #region Private overrides

    def _table(self, table, workbook):
        worksheet = workbook.add_worksheet(self._sheet_name(table.name, workbook))

        row_no = 0
        for row in table.rows:
            row_no += 1
            worksheet.write_row(row_no, 0, row)

        if row_no > 0:
            worksheet.add_table(0, 0, row_no,
                                len(table.columns) - 1, {"columns": [{
                                    "header": c
                                } for c in table.columns]})
        else:
            worksheet.write_row(0, 0, table.columns)

    #endregion

    def _sheet_name(self, name, workbook):
        # respect the 31 character limit and avoid collisions
        name = name[:_SHEET_NAME_LIMIT]
        candidate = name
        i = 0
        while workbook.get_worksheet_by_name(candidate) is not None:
            i += 1
            suffix = "~{0}".format(i)
            candidate = name[:_SHEET_NAME_LIMIT - len(suffix)] + suffix
        return candidate
