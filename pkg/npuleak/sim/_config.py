# coding=utf-8
"""This module contains the NPU resource description shared by the simulator, tuner and shaper."""

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

_NPU_FIELDS = [
    "clock_hz", "pe_count", "weight_scratchpad_bytes", "act_scratchpad_bytes", "dram_bandwidth_Bps",
    "dma_burst_bytes", "step_overhead_cycles"
]

_KIB = 1024
_MIB = 1024 * 1024


class NpuConfig(collections.namedtuple("NpuConfig", _NPU_FIELDS)):
    """
    Resources of a VTA-like accelerator.

    The defaults are the full (temporal-sharing) allocation: 100 MHz, 256 GEMM units, 2 MB weight scratchpad,
    256 KB activation scratchpad and 400 MB/s to DRAM, i.e. 4 bytes per cycle.
    """
    __slots__ = ()

    def __new__(cls,
                clock_hz=100e6,
                pe_count=256,
                weight_scratchpad_bytes=2 * _MIB,
                act_scratchpad_bytes=256 * _KIB,
                dram_bandwidth_Bps=400e6,
                dma_burst_bytes=64,
                step_overhead_cycles=32):
        self = super(NpuConfig, cls).__new__(cls, clock_hz, pe_count, weight_scratchpad_bytes, act_scratchpad_bytes,
                                             dram_bandwidth_Bps, dma_burst_bytes, step_overhead_cycles)
        self.validate()
        return self

    @classmethod
    def spatial_share(cls):
        """A quarter of the default resources, as one of four spatially shared tenants would get."""
        return cls(pe_count=64, weight_scratchpad_bytes=512 * _KIB, act_scratchpad_bytes=64 * _KIB,
                   dram_bandwidth_Bps=100e6)

    @classmethod
    def from_dict(cls, values):
        """
        Build from a configuration mapping. preset (default or spatial) selects the base values;
        every other key overrides a field.
        """
        values = dict(values or {})
        preset = str(values.pop("preset", "default")).lower()
        if preset == "default":
            base = cls()
        elif preset == "spatial":
            base = cls.spatial_share()
        else:
            raise ValueError("Unknown NPU preset '{0}'; expected 'default' or 'spatial'".format(preset))
        unknown = sorted(set(values) - set(_NPU_FIELDS))
        if unknown:
            raise ValueError("Unknown NPU settings: {0}".format(", ".join(unknown)))
        return base._replace(**values)

    def _replace(self, **kwargs):
        return NpuConfig(**dict(self._asdict(), **kwargs))

    def validate(self):
        for field in _NPU_FIELDS:
            value = getattr(self, field)
            if field == "step_overhead_cycles":
                if value < 0:
                    raise ValueError("step_overhead_cycles must not be negative")
            elif not value > 0:
                raise ValueError("{0} must be positive, got {1!r}".format(field, value))
        if self.dma_burst_bytes > self.weight_scratchpad_bytes:
            raise ValueError("dma_burst_bytes must not exceed weight_scratchpad_bytes")
        return self

    @property
    def bytes_per_cycle(self):
        return self.dram_bandwidth_Bps / self.clock_hz

    @property
    def cycles_per_burst(self):
        return max(1, int(-(-self.dma_burst_bytes // self.bytes_per_cycle)))

    def dma_cycles(self, nbytes):
        """Cycles the DMA engine is busy moving nbytes; transfers are whole bursts."""
        return -(-int(nbytes) // self.dma_burst_bytes) * self.cycles_per_burst

    def window_cycles(self, window_us):
        """Length of a sampling window in (whole) cycles."""
        if not window_us > 0:
            raise ValueError("window_us must be positive, got {0!r}".format(window_us))
        return max(1, int(round(window_us * self.clock_hz / 1e6)))

    def cycles_to_us(self, cycles):
        return cycles * 1e6 / self.clock_hz
