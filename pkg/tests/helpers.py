# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins import *
from future.builtins.disabled import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

import numpy as np

from npuleak.catalog import LayerSpec, ModelSpec, TileConfig
from npuleak.sim import BandwidthTrace, NpuConfig


def tiny_model(name="tiny"):
    """Three weight-loading layers with a pool and an activation between them; small enough to enumerate."""
    return ModelSpec(name, [
        LayerSpec(0, "conv", 4, 16, 3, 3, 16, 16, 1),
        LayerSpec(1, "activation", 16, 16, 1, 1, 16, 16, 1),
        LayerSpec(2, "conv", 16, 32, 3, 3, 16, 16, 1),
        LayerSpec(3, "pool", 32, 32, 2, 2, 16, 16, 2),
        LayerSpec(4, "conv", 32, 32, 3, 3, 8, 8, 1),
    ]).validate()


def tiny_schedule(model=None):
    model = model or tiny_model()
    return {
        0: TileConfig(16, 4, 16, 16),
        2: TileConfig(8, 8, 8, 8),
        4: TileConfig(8, 8, 8, 8),
    }


def load_bound_npu():
    """Enough compute that every layer waits on its weight loads."""
    return NpuConfig(pe_count=4096, step_overhead_cycles=0)


def step_trace(levels, length, window_us=4.0):
    """A read trace made of constant plateaus, one per level."""
    reads = np.concatenate([np.full(length, level, dtype=np.int64) for level in levels])
    return BandwidthTrace(window_us, reads, np.zeros_like(reads))
