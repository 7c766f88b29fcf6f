# coding=utf-8

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

from .npu_leak_error import NpuLeakError

class CatalogError(NpuLeakError):
    """Error raised for unknown models and malformed catalog or schedule files."""

    def __init__(self, message, path=None, line=None, field=None, innerError=None):
        if line is not None:
            message = "{0} (line {1}{2})".format(message, line, ", field '{0}'".format(field) if field else "")
        super(CatalogError, self).__init__(message, innerError)
        self._path = path
        self._line = line
        self._field = field

    @property
    def path(self):
        return self._path

    @property
    def line(self):
        return self._line

    @property
    def field(self):
        return self._field
