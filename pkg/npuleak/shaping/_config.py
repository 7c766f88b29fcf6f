# coding=utf-8
"""This module contains the traffic-shaper settings."""

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
import math

# Local imports
from ..sim import DEFAULT_WINDOW_US

_SHAPER_FIELDS = ["target_Bps", "quantum_bytes", "write_period_us", "write_quantum_bytes", "window_us",
                  "max_cycle_factor", "staging_bytes"]


class ShaperConfig(collections.namedtuple("ShaperConfig", _SHAPER_FIELDS)):
    """
    Constant-rate shaping of the DRAM interface.

    quantum_bytes defaults to the NPU's DMA burst, write_period_us to four sampling windows and staging_bytes
    (how far ahead of the NPU the shaper may fetch weights) to the NPU's weight scratchpad. A run longer than
    max_cycle_factor times the unshaped run is abandoned as infeasible.
    """
    __slots__ = ()

    def __new__(cls, target_Bps, quantum_bytes=None, write_period_us=None, write_quantum_bytes=4096,
                window_us=DEFAULT_WINDOW_US, max_cycle_factor=50, staging_bytes=None):
        if not target_Bps > 0:
            raise ValueError("target_Bps must be positive, got {0!r}".format(target_Bps))
        if quantum_bytes is not None and not quantum_bytes > 0:
            raise ValueError("quantum_bytes must be positive, got {0!r}".format(quantum_bytes))
        if not window_us > 0:
            raise ValueError("window_us must be positive, got {0!r}".format(window_us))
        if write_period_us is None:
            write_period_us = 4 * window_us
        if not write_period_us > 0 or not write_quantum_bytes > 0:
            raise ValueError("write_period_us and write_quantum_bytes must be positive")
        if not max_cycle_factor >= 1:
            raise ValueError("max_cycle_factor must be at least 1, got {0!r}".format(max_cycle_factor))
        if staging_bytes is not None and staging_bytes < 0:
            raise ValueError("staging_bytes must not be negative, got {0!r}".format(staging_bytes))
        return super(ShaperConfig, cls).__new__(cls, target_Bps, quantum_bytes, write_period_us, write_quantum_bytes,
                                                window_us, max_cycle_factor, staging_bytes)

    def resolved(self, npu):
        """This config with the NPU defaults filled in; checks quantum_bytes is a whole number of DMA bursts."""
        quantum = self.quantum_bytes or npu.dma_burst_bytes
        if quantum % npu.dma_burst_bytes:
            raise ValueError("quantum_bytes ({0}) must be a multiple of the DMA burst ({1})".format(
                quantum, npu.dma_burst_bytes))
        staging = npu.weight_scratchpad_bytes if self.staging_bytes is None else self.staging_bytes
        return self._replace(quantum_bytes=quantum, staging_bytes=staging)

    def slot_cycles(self, clock_hz):
        """Cycles between two read quanta: quantum / target, rounded up to a whole cycle."""
        return int(math.ceil(self.quantum_bytes * clock_hz / self.target_Bps - 1e-9))
