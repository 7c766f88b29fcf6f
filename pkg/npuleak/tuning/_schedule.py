# coding=utf-8
"""This module contains the TileSchedule type and the schedule file format."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import csv
import io
import logging

try:
    from collections.abc import Mapping
except ImportError:
    from collections import Mapping

from pathlib2 import Path

# Local imports
from .._atomic import atomic_open
from ..catalog import DATA_DIR, TileConfig, check_legal
from ..exceptions import CatalogError, ScheduleError, TileConfigError

SCHEDULE_COLUMNS = ("layer_id", "tile_oc", "tile_ic", "tile_h", "tile_w")


def _get_logger():
    return logging.getLogger("npuleak.tuning")


class TileSchedule(Mapping):
    """The tile config chosen for each weight-loading layer of one model, keyed by layer id."""

    def __init__(self, model_name, per_layer, total_cycles=None):
        self._model_name = model_name
        self._per_layer = dict((int(k), TileConfig(*v)) for k, v in per_layer.items())
        self._total_cycles = total_cycles

    @property
    def model_name(self):
        return self._model_name

    @property
    def per_layer(self):
        return dict(self._per_layer)

    @property
    def total_cycles(self):
        return self._total_cycles

    def with_total_cycles(self, total_cycles):
        return TileSchedule(self._model_name, self._per_layer, total_cycles)

    def validate(self, model, npu):
        """Raise ScheduleError unless the schedule covers exactly the model's weight layers with legal configs."""
        if self._model_name != model.name:
            raise ScheduleError("Schedule is for model '{0}', not '{1}'".format(self._model_name, model.name))
        weight_ids = set(layer.id for layer in model.weight_layers)
        missing = sorted(weight_ids - set(self._per_layer))
        extra = sorted(set(self._per_layer) - weight_ids)
        if missing or extra:
            raise ScheduleError("Schedule for '{0}' does not match the model (missing {1}, unexpected {2})".format(
                model.name, missing, extra))
        for layer in model.weight_layers:
            try:
                check_legal(layer, self._per_layer[layer.id], npu)
            except TileConfigError as e:
                raise ScheduleError(str(e), e)
        return self

    def __getitem__(self, layer_id):
        return self._per_layer[layer_id]

    def __iter__(self):
        return iter(sorted(self._per_layer))

    def __len__(self):
        return len(self._per_layer)

    def __eq__(self, other):
        if not isinstance(other, TileSchedule):
            return NotImplemented
        return self._model_name == other._model_name and self._per_layer == other._per_layer

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __repr__(self):
        return "TileSchedule({0!r}, {1} layers, total_cycles={2})".format(self._model_name, len(self),
                                                                          self._total_cycles)


def reference_schedule_path(name):
    return DATA_DIR.joinpath("{0}.schedule".format(name.lower()))


def load_schedule(model, path=None):
    """
    Load a schedule file for model; without a path, the shipped reference (victim) schedule of the model.

    Lines are layer_id,tile_oc,tile_ic,tile_h,tile_w; a default line applies to every weight-loading
    layer without its own line. Factors larger than a layer dimension are clamped to it.
    """
    path = Path(str(path)) if path is not None else reference_schedule_path(model.name)
    if not path.exists():
        raise CatalogError("Schedule file does not exist: {0}".format(path), path=path)

    default = None
    rows = {}
    with io.open(str(path), "r", encoding="utf-8") as fin:
        for number, line in enumerate(fin, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            row = [v.strip() for v in next(csv.reader([text]))]
            if len(row) != len(SCHEDULE_COLUMNS):
                raise CatalogError("Expected {0} fields, found {1}".format(len(SCHEDULE_COLUMNS), len(row)),
                                   path=path, line=number)
            factors = []
            for column, value in zip(SCHEDULE_COLUMNS[1:], row[1:]):
                try:
                    factors.append(int(value))
                except ValueError as ve:
                    raise CatalogError("'{0}' is not an integer".format(value), path=path, line=number,
                                       field=column, innerError=ve)
            if row[0].lower() == "default":
                default = TileConfig(*factors)
                continue
            try:
                rows[int(row[0])] = TileConfig(*factors)
            except ValueError as ve:
                raise CatalogError("'{0}' is not a layer id".format(row[0]), path=path, line=number,
                                   field="layer_id", innerError=ve)

    per_layer = {}
    for layer in model.weight_layers:
        cfg = rows.pop(layer.id, default)
        if cfg is None:
            raise ScheduleError("{0}: no tile config for layer {1} and no default line".format(path, layer.id))
        per_layer[layer.id] = cfg.clamp(layer)
    if rows:
        raise ScheduleError("{0}: layers {1} are not weight-loading layers of '{2}'".format(
            path, sorted(rows), model.name))

    _get_logger().debug("Loaded schedule for '%s' from %s", model.name, path)
    return TileSchedule(model.name, per_layer)


def write_schedule(schedule, path):
    """Write one line per layer (no default line); returns the Path written."""
    path = Path(str(path))
    with atomic_open(path, newline="") as fout:
        fout.write("# Tile schedule for {0}.\n".format(schedule.model_name))
        if schedule.total_cycles is not None:
            fout.write("# total_cycles: {0}\n".format(schedule.total_cycles))
        for layer_id in schedule:
            fout.write(",".join(str(v) for v in (layer_id, ) + tuple(schedule[layer_id])) + "\n")
    return path
