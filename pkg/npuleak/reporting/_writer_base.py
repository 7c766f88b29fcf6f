# coding=utf-8
"""Base class for report writers."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
from future.utils import with_metaclass
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
from abc import ABCMeta as _ABCMeta, abstractmethod

# Third-party imports
from pathlib2 import Path

# Local imports
from .._atomic import atomic_open


class ReportWriterBase(with_metaclass(_ABCMeta, object)):
    """Writes a Table as one file in a format of the subclass's choosing."""

    extension = None
    newline = None

    def table(self, table, output_dir, overwrite=True):
        output_dir = Path(str(output_dir))
        output_path = self._default_name(table, output_dir)

        if output_path.exists() and not overwrite:
            raise ValueError("{0} already exists.".format(output_path))

        with atomic_open(output_path, newline=self.newline) as fout:
            self._table(table, fout)
        return output_path

    def tables(self, tables, output_dir):
        return [self.table(t, output_dir) for t in tables]

    @abstractmethod
    def _table(self, table, fout):
        return

    def _default_name(self, table, output_dir):
        return output_dir.joinpath(table.name + self.extension)


def format_value(value):
    if isinstance(value, float):
        return "{0:.4f}".format(value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    return "{0}".format(value)
