# coding=utf-8
"""This module labels the boundaries between adjacent weight-loading layers by how visible they are in a trace."""

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
import logging

# Local imports
from .._json import JsonEnum
from ..exceptions import ScheduleError
from ._tiling import tiles_for


def _get_logger():
    return logging.getLogger("npuleak.catalog")


class BoundaryClass(JsonEnum):
    T1_DIFF_TILE_SIZE = "t1_diff_tile_size"
    T2_SAME_SIZE_DIFF_COUNT = "t2_same_size_diff_count"
    T3_IDENTICAL = "t3_identical"

    @property
    def is_easy(self):
        return self == BoundaryClass.T1_DIFF_TILE_SIZE

    @classmethod
    def classify(cls, left, right):
        """Class of a boundary between two layers given their (num_tiles, bytes_per_tile) pairs."""
        if left[1] != right[1]:
            return cls.T1_DIFF_TILE_SIZE
        if left[0] != right[0]:
            return cls.T2_SAME_SIZE_DIFF_COUNT
        return cls.T3_IDENTICAL


class BoundaryLabel(collections.namedtuple("BoundaryLabel", ["between", "boundary_class", "left", "right"])):
    """
    The boundary between two adjacent weight-loading layers.

    between holds the two layer ids; left and right hold each layer's (num_tiles, bytes_per_tile).
    """
    __slots__ = ()

    @property
    def is_easy(self):
        return self.boundary_class.is_easy


def label_boundaries(model, schedule):
    """
    One label per adjacent pair of weight-loading layers, in model order.

    :param schedule: a mapping from layer id to TileConfig covering every weight-loading layer of the model.
    """
    schedule_model = getattr(schedule, "model_name", None)
    if schedule_model is not None and schedule_model != model.name:
        raise ScheduleError("Schedule is for model '{0}', not '{1}'".format(schedule_model, model.name))

    weight_layers = model.weight_layers
    weight_ids = set(layer.id for layer in weight_layers)
    unknown = sorted(set(schedule.keys()) - weight_ids)
    if unknown:
        raise ScheduleError("Schedule names layers {0} that are not weight-loading layers of '{1}'".format(
            unknown, model.name))

    tiles = []
    for layer in weight_layers:
        if layer.id not in schedule:
            raise ScheduleError("Schedule has no tile config for layer {0} of '{1}'".format(layer.id, model.name))
        tiles.append(tiles_for(layer, schedule[layer.id]))

    labels = [
        BoundaryLabel((a.id, b.id), BoundaryClass.classify(ta, tb), ta, tb)
        for a, b, ta, tb in zip(weight_layers, weight_layers[1:], tiles, tiles[1:])
    ]
    _get_logger().debug("Model '%s': %d boundaries, %d easy", model.name, len(labels),
                        sum(1 for label in labels if label.is_easy))
    return labels
