# coding=utf-8
"""
This module contains the tile-size state-space exploration.

Layers share no state under the cost model, so the fastest schedule is the per-layer argmin and the cost of any
schedule is a sum of per-layer costs looked up from one table per layer.
"""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import logging

# Third-party imports
import numpy as np

# Local imports
from .._multiprocessing import map_ordered
from ..catalog import TileConfig, config_grid, divisors, layer_dims
from ..exceptions import ExperimentError, ScheduleError, TileConfigError
from ..sim import elementwise_cycles, layer_cycles_batch
from ._schedule import TileSchedule


def _get_logger():
    return logging.getLogger("npuleak.tuning")


class LayerSpace(object):
    """Every legal config of one weight-loading layer with its cost, best (by tie-break order) first."""

    def __init__(self, layer, npu, allow_padding=False):
        grid = config_grid(layer, npu, allow_padding)
        costs = layer_cycles_batch(layer, grid, npu)
        exact = np.all(np.array(layer_dims(layer))[None, :] % grid == 0, axis=1)
        order = np.lexsort((grid[:, 3], grid[:, 2], grid[:, 1], grid[:, 0], costs["num_tiles"], ~exact,
                            costs["cycles"]))
        self.layer = layer
        self.grid = grid[order]
        self.cycles = costs["cycles"][order]
        self.num_tiles = costs["num_tiles"][order]
        self.exact = exact[order]

    @property
    def best(self):
        return TileConfig(*(int(v) for v in self.grid[0]))

    @property
    def best_cycles(self):
        return int(self.cycles[0])

    def __len__(self):
        return len(self.grid)


def _spaces(model, npu, allow_padding=False):
    try:
        return [LayerSpace(layer, npu, allow_padding) for layer in model.weight_layers]
    except TileConfigError as e:
        raise ScheduleError("Model '{0}' cannot run on this NPU: {1}".format(model.name, e), e)


def _fixed_cycles(model, npu):
    return sum(elementwise_cycles(layer, npu) for layer in model.layers if not layer.loads_weights)


def tune(model, npu, allow_padding=False):
    """
    The fastest schedule: per layer, the config with the fewest cycles.

    Ties go to exact-divisor configs, then to fewer tiles, then to the lexicographically smallest config.
    """
    spaces = _spaces(model, npu, allow_padding)
    per_layer = dict((space.layer.id, space.best) for space in spaces)
    total = _fixed_cycles(model, npu) + sum(space.best_cycles for space in spaces)
    _get_logger().info("Tuned '%s': %d cycles over %d weight layers", model.name, total, len(spaces))
    for space in spaces:
        _get_logger().debug("  layer %d: %s of %d configs, %d cycles", space.layer.id, space.best.config_id,
                            len(space), space.best_cycles)
    return TileSchedule(model.name, per_layer, total)


class ExploreResult(object):
    """Overhead of uniformly sampled schedules relative to the tuned one."""

    def __init__(self, model_name, best_cycles, ratios, seed):
        self.model_name = model_name
        self.best_cycles = best_cycles
        self.ratios = np.asarray(ratios, dtype=float)
        self.seed = seed

    @property
    def min(self):
        return float(self.ratios.min())

    @property
    def median(self):
        return float(np.median(self.ratios))

    @property
    def max(self):
        return float(self.ratios.max())

    def summary(self):
        return {
            "model": self.model_name,
            "best_cycles": self.best_cycles,
            "samples": len(self.ratios),
            "min_ratio": self.min,
            "median_ratio": self.median,
            "max_ratio": self.max,
        }

    def rows(self):
        """Plot-ready (sample index, ratio) pairs."""
        return [(index, float(ratio)) for index, ratio in enumerate(self.ratios)]


def _sum_cycles(packed):
    tables, choices = packed
    return sum(table[choice] for table, choice in zip(tables, choices))


def explore(model, npu, n_samples, seed, workers=1, chunk_size=256):
    """
    Sample n_samples schedules uniformly (independent per-layer draws) and return their cycle ratio to tune().

    The draws are made up front from one seeded generator, so results do not depend on the worker count.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1, got {0!r}".format(n_samples))

    spaces = _spaces(model, npu)
    fixed = _fixed_cycles(model, npu)
    best = fixed + sum(space.best_cycles for space in spaces)

    rng = np.random.RandomState(seed)
    draws = [rng.randint(0, len(space), size=n_samples) for space in spaces]
    tables = [space.cycles for space in spaces]
    chunks = [(tables, [d[start:start + chunk_size] for d in draws]) for start in range(0, n_samples, chunk_size)]

    outcomes = map_ordered(_sum_cycles, chunks, workers)
    failed = [o for o in outcomes if o.failed]
    if failed:
        raise ExperimentError("Exploring '{0}' failed in {1} chunk(s)".format(model.name, len(failed)),
                              [o.exception for o in failed])

    totals = fixed + np.concatenate([np.atleast_1d(o.value) for o in outcomes])
    result = ExploreResult(model.name, best, totals / float(best), seed)
    _get_logger().info("Explored '%s': %d samples, median %.3fx, max %.3fx", model.name, n_samples, result.median,
                       result.max)
    return result


def constant_tile_schedule(model, npu):
    """
    The fastest schedule that uses one config for every weight-loading layer.

    Candidate factors are the divisors of every layer dimension in the model; a candidate is applied to each
    layer clamped to its dimensions and must fit the scratchpads for all of them.
    """
    layers = model.weight_layers
    values = [sorted(set().union(*[divisors(layer_dims(layer)[axis]) for layer in layers])) for axis in range(4)]
    grid = np.array(np.meshgrid(*values, indexing="ij")).reshape(4, -1).T.astype(np.int64)

    total = np.zeros(len(grid), dtype=np.int64)
    tiles = np.zeros(len(grid), dtype=np.int64)
    inexact = np.zeros(len(grid), dtype=np.int64)
    legal = np.ones(len(grid), dtype=bool)
    for layer in layers:
        dims = np.array(layer_dims(layer))
        clamped = np.minimum(grid, dims)
        toc, tic, th, tw = clamped.T
        weight = toc * tic * layer.kernel_h * layer.kernel_w * layer.element_size
        act = tic * ((th - 1) * layer.stride + layer.kernel_h) * ((tw - 1) * layer.stride + layer.kernel_w) * \
            layer.element_size
        legal &= (weight <= npu.weight_scratchpad_bytes) & (act <= npu.act_scratchpad_bytes)
        costs = layer_cycles_batch(layer, clamped, npu)
        total += costs["cycles"]
        tiles += costs["num_tiles"]
        inexact += np.any(dims[None, :] % clamped != 0, axis=1)

    if not legal.any():
        raise ScheduleError("No single tile config fits every layer of '{0}' on this NPU".format(model.name))

    index = np.flatnonzero(legal)
    keys = (grid[index, 3], grid[index, 2], grid[index, 1], grid[index, 0], tiles[index], inexact[index],
            total[index])
    chosen = index[np.lexsort(keys)[0]]
    cfg = TileConfig(*(int(v) for v in grid[chosen]))
    cycles = _fixed_cycles(model, npu) + int(total[chosen])

    _get_logger().info("Constant tile schedule for '%s': %s, %d cycles (%d candidates)", model.name, cfg.config_id,
                       cycles, len(index))
    return TileSchedule(model.name, dict((layer.id, cfg) for layer in layers), cycles)
