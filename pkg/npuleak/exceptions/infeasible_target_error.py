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

class InfeasibleTargetError(NpuLeakError):
    """Error raised when a traffic-shaping target cannot complete an inference."""

    def __init__(self, message, target_Bps, innerError=None):
        super(InfeasibleTargetError, self).__init__(message, innerError)
        self._target_Bps = target_Bps

    @property
    def target_Bps(self):
        return self._target_Bps
