# coding=utf-8

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

class NpuLeakError(Exception):
    """Base error class for all npuleak errors."""

    def __init__(self, message, innerError=None):
        super(NpuLeakError, self).__init__(message)
        self._innerError = innerError

    @property
    def innerError(self):
        return self._innerError
