# coding=utf-8
"""
This module contains the analytic cost model of one layer.

A weight-loading layer streams its tiles through a one-deep double buffer: the load of tile k+1 overlaps the
compute of tile k. With n tiles, load time L and compute time C per tile the layer takes L + (n-1)max(L, C) + C
cycles. Layers do not overlap, so a schedule's cost is the sum of its layers' costs.
"""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Third-party imports
import numpy as np

# Local imports
from ..catalog import TileConfig, check_legal
from ..exceptions import ScheduleError


def _ceil_div(a, b):
    return -(-a // b)


class TileCost(object):
    """Per-tile load and compute cycles of one layer under one tile config."""

    __slots__ = ("num_tiles", "bytes_per_tile", "load_cycles", "compute_cycles")

    def __init__(self, num_tiles, bytes_per_tile, load_cycles, compute_cycles):
        self.num_tiles = num_tiles
        self.bytes_per_tile = bytes_per_tile
        self.load_cycles = load_cycles
        self.compute_cycles = compute_cycles

    @property
    def layer_cycles(self):
        return pipeline_cycles(self.num_tiles, self.load_cycles, self.compute_cycles)

    @property
    def load_bound(self):
        return self.load_cycles >= self.compute_cycles

    def __repr__(self):
        return "TileCost(num_tiles={0}, bytes_per_tile={1}, load={2}, compute={3})".format(
            self.num_tiles, self.bytes_per_tile, self.load_cycles, self.compute_cycles)


def pipeline_cycles(num_tiles, load_cycles, compute_cycles):
    return load_cycles + (num_tiles - 1) * np.maximum(load_cycles, compute_cycles) + compute_cycles


def tile_cost(layer, cfg, npu):
    """TileCost of a weight-loading layer; raises TileConfigError if cfg does not fit npu."""
    cfg = check_legal(layer, cfg, npu)
    batch = layer_cycles_batch(layer, np.array([cfg], dtype=np.int64), npu)
    return TileCost(*(int(batch[key][0]) for key in ("num_tiles", "bytes_per_tile", "load_cycles",
                                                      "compute_cycles")))


def layer_cycles_batch(layer, grid, npu):
    """
    Cost of a weight-loading layer for every row of an (n, 4) tile config array.

    :returns: dict of int64 arrays: num_tiles, bytes_per_tile, load_cycles, compute_cycles, cycles.
    """
    grid = np.minimum(np.asarray(grid, dtype=np.int64),
                      np.array([layer.out_channels, layer.in_channels, layer.output_h, layer.output_w]))
    toc, tic, th, tw = grid.T
    kernel = layer.kernel_h * layer.kernel_w

    num_tiles = _ceil_div(layer.out_channels, toc) * _ceil_div(layer.in_channels, tic)
    bytes_per_tile = toc * tic * kernel * layer.element_size
    load = _ceil_div(bytes_per_tile, npu.dma_burst_bytes) * npu.cycles_per_burst
    steps = _ceil_div(layer.output_h, th) * _ceil_div(layer.output_w, tw)
    compute = steps * (_ceil_div(toc * tic * kernel * th * tw, npu.pe_count) + npu.step_overhead_cycles)

    return {
        "num_tiles": num_tiles,
        "bytes_per_tile": bytes_per_tile,
        "load_cycles": load,
        "compute_cycles": compute,
        "cycles": pipeline_cycles(num_tiles, load, compute),
    }


def elementwise_cycles(layer, npu):
    """Cycles of a layer without weights (pool, activation, residual add)."""
    return max(1, _ceil_div(layer.element_ops, npu.pe_count))


def layer_cycles(layer, cfg, npu):
    if not layer.loads_weights:
        return elementwise_cycles(layer, npu)
    return tile_cost(layer, cfg, npu).layer_cycles


def schedule_cycles(model, schedule, npu):
    """Total cycles of a model under a schedule (a mapping from weight-layer id to TileConfig)."""
    total = 0
    for layer in model.layers:
        cfg = None
        if layer.loads_weights:
            cfg = schedule.get(layer.id)
            if cfg is None:
                raise ScheduleError("Schedule has no tile config for layer {0} of '{1}'".format(
                    layer.id, model.name))
        total += int(layer_cycles(layer, cfg, npu))
    return total


def rank_key(layer, cfg, cycles):
    """Ordering of configs with equal cycles: exact divisors first, then fewer tiles, then the config itself."""
    cfg = TileConfig(*cfg)
    num_tiles = _ceil_div(layer.out_channels, min(cfg.tile_oc, layer.out_channels)) * \
        _ceil_div(layer.in_channels, min(cfg.tile_ic, layer.in_channels))
    return (int(cycles), not cfg.is_exact(layer), num_tiles, tuple(cfg))
