# coding=utf-8
"""
This module contains the tiling rules: how a layer's weights are blocked into scratchpad-sized tiles.

A weight tile is a tile_oc x tile_ic x kh x kw block. Each weight tile stays resident while it is applied
over ceil(oh / tile_h) x ceil(ow / tile_w) spatial steps. A factor that does not divide its dimension leaves a
short last tile, which is zero-padded to the full tile size.
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
import collections

# Third-party imports
import numpy as np

# Local imports
from ..exceptions import TileConfigError


def _ceil_div(a, b):
    return -(-a // b)


class TileConfig(collections.namedtuple("TileConfig", ["tile_oc", "tile_ic", "tile_h", "tile_w"])):
    """Blocking factors along output channels, input channels, output height and output width."""
    __slots__ = ()

    def clamp(self, layer):
        """The config with every factor clamped to the layer dimension it blocks."""
        return TileConfig(*[min(f, d) for f, d in zip(self, layer_dims(layer))])

    def is_exact(self, layer):
        return all(d % f == 0 for f, d in zip(self.clamp(layer), layer_dims(layer)))

    @property
    def config_id(self):
        return "{0}x{1}x{2}x{3}".format(*self)

    @classmethod
    def whole(cls, layer):
        """The config that covers the layer with a single tile."""
        return cls(*layer_dims(layer))


def layer_dims(layer):
    """The (oc, ic, oh, ow) dimensions the four blocking factors act on."""
    return (layer.out_channels, layer.in_channels, layer.output_h, layer.output_w)


def tiles_for(layer, cfg):
    """
    Tile count and (padded) bytes per tile of a weight-loading layer.

    :returns: (num_tiles, bytes_per_tile); num_tiles * bytes_per_tile >= layer.weight_bytes, with equality when
              every factor divides its dimension.
    """
    cfg = _checked(layer, cfg)
    num_tiles = _ceil_div(layer.out_channels, cfg.tile_oc) * _ceil_div(layer.in_channels, cfg.tile_ic)
    bytes_per_tile = cfg.tile_oc * cfg.tile_ic * layer.kernel_h * layer.kernel_w * layer.element_size
    return num_tiles, bytes_per_tile


def tile_payloads(layer, cfg):
    """Unpadded bytes of every tile, in load order (output-channel blocks outer, input-channel blocks inner)."""
    cfg = _checked(layer, cfg)
    per_element = layer.kernel_h * layer.kernel_w * layer.element_size
    oc_blocks = _block_sizes(layer.out_channels, cfg.tile_oc)
    ic_blocks = _block_sizes(layer.in_channels, cfg.tile_ic)
    return [oc * ic * per_element for oc in oc_blocks for ic in ic_blocks]


def spatial_steps(layer, cfg):
    cfg = _checked(layer, cfg)
    return _ceil_div(layer.output_h, cfg.tile_h) * _ceil_div(layer.output_w, cfg.tile_w)


def activation_footprint(layer, cfg):
    """Bytes of input activations one spatial step needs on chip."""
    cfg = cfg.clamp(layer)
    in_h = (cfg.tile_h - 1) * layer.stride + layer.kernel_h
    in_w = (cfg.tile_w - 1) * layer.stride + layer.kernel_w
    return cfg.tile_ic * in_h * in_w * layer.element_size


def check_legal(layer, cfg, npu):
    """Raise TileConfigError unless cfg can run layer on npu; returns the clamped config."""
    cfg = _checked(layer, cfg)
    _, bytes_per_tile = tiles_for(layer, cfg)
    if bytes_per_tile > npu.weight_scratchpad_bytes:
        raise TileConfigError(
            "Layer {0}: tile {1} needs {2} weight bytes, scratchpad holds {3}".format(
                layer.id, cfg.config_id, bytes_per_tile, npu.weight_scratchpad_bytes), layer)
    footprint = activation_footprint(layer, cfg)
    if footprint > npu.act_scratchpad_bytes:
        raise TileConfigError(
            "Layer {0}: tile {1} needs {2} activation bytes, scratchpad holds {3}".format(
                layer.id, cfg.config_id, footprint, npu.act_scratchpad_bytes), layer)
    return cfg


def enumerate_tile_configs(layer, npu, allow_padding=False):
    """
    All tile configs of a weight-loading layer that fit the NPU scratchpads, sorted lexicographically.

    Factors are the exact divisors of each dimension; with allow_padding, powers of two that do not divide the
    dimension are added (their last tile is padded).
    """
    grid = config_grid(layer, npu, allow_padding)
    return [TileConfig(*(int(v) for v in row)) for row in grid]


def config_grid(layer, npu, allow_padding=False):
    """enumerate_tile_configs as an (n, 4) integer array, for vectorised cost evaluation."""
    if not layer.loads_weights:
        raise TileConfigError("Layer {0} ({1}) loads no weights and has no tile configs".format(
            layer.id, layer.kind.value), layer)

    candidates = [_factor_candidates(d, allow_padding) for d in layer_dims(layer)]
    grid = np.array(np.meshgrid(*candidates, indexing="ij")).reshape(4, -1).T.astype(np.int64)

    toc, tic, th, tw = grid.T
    weight = toc * tic * layer.kernel_h * layer.kernel_w * layer.element_size
    act = tic * ((th - 1) * layer.stride + layer.kernel_h) * ((tw - 1) * layer.stride + layer.kernel_w) * \
        layer.element_size
    grid = grid[(weight <= npu.weight_scratchpad_bytes) & (act <= npu.act_scratchpad_bytes)]

    if len(grid) == 0:
        raise TileConfigError(
            "Layer {0} ({1}) cannot fit even a minimal tile; the NPU is too small".format(layer.id, layer.describe()),
            layer)
    return grid


def divisors(n):
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _factor_candidates(dim, allow_padding):
    values = set(divisors(dim))
    if allow_padding:
        p = 1
        while p < dim:
            values.add(p)
            p *= 2
    return sorted(values)


def _block_sizes(dim, factor):
    full, rest = divmod(dim, factor)
    return [factor] * full + ([rest] if rest else [])


def _checked(layer, cfg):
    if not layer.loads_weights:
        raise TileConfigError("Layer {0} ({1}) loads no weights".format(layer.id, layer.kind.value), layer)
    if len(cfg) != 4 or any(int(f) != f or f < 1 for f in cfg):
        raise TileConfigError("Layer {0}: illegal tile config {1!r}".format(layer.id, tuple(cfg)), layer)
    return TileConfig(*cfg).clamp(layer)
