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

class TileConfigError(NpuLeakError):
    """Error raised when a tile configuration is illegal for a layer, or no legal configuration exists."""

    def __init__(self, message, layer=None, innerError=None):
        super(TileConfigError, self).__init__(message, innerError)
        self._layer = layer

    @property
    def layer(self):
        return self._layer
