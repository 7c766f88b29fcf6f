# coding=utf-8
"""
This module contains the attacker's offline timing profile.

The profile is built only from the attacker's own simulations. Each entry describes one layer group (a
weight-loading layer plus the pool, activation and residual layers that follow it, which share its trace
segment) run in isolation under one tile config.
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
import io
import json
import logging

# Third-party imports
import numpy as np

from pathlib2 import Path

# Local imports
from .._atomic import atomic_open
from .._json import ToJsonEncoder
from .._multiprocessing import map_ordered
from ..catalog import ModelSpec, TileConfig, enumerate_tile_configs, check_legal
from ..exceptions import ExperimentError, ProfileError, TileConfigError
from ..sim import DEFAULT_WINDOW_US, simulate_inference, window_cycles

DEFAULT_CONFIGS_PER_LAYER = 4


def _get_logger():
    return logging.getLogger("npuleak.detection")


class ProfileEntry(
        collections.namedtuple("ProfileEntry",
                               ["label", "config_id", "duration_windows", "median_bw", "mean_bw", "model",
                                "layer_id"])):
    """Expected trace segment of one layer group under one tile config; bandwidths are bytes per window."""
    __slots__ = ()


def layer_groups(model):
    """Split a model into groups, each a weight-loading layer followed by the layers without weights after it."""
    groups = []
    for layer in model.layers:
        if layer.loads_weights or not groups:
            groups.append([layer])
        else:
            groups[-1].append(layer)
    return [tuple(group) for group in groups if group[0].loads_weights]


def group_label(group):
    return group[0].describe()


def _group_key(group):
    return tuple(layer.dims_key for layer in group)


def _profile_task(packed):
    model_name, group, cfg, npu, window_us = packed
    isolated = ModelSpec("{0}:{1}".format(model_name, group[0].id), group, group[0].element_size)
    result = simulate_inference(isolated, {group[0].id: cfg}, npu, window_us=window_us)
    duration = result.total_cycles / float(window_cycles(window_us, npu.clock_hz))
    reads = result.trace.read_bytes
    return ProfileEntry(group_label(group), TileConfig(*cfg).clamp(group[0]).config_id, duration,
                        float(np.median(reads)), float(reads.sum()) / duration, model_name, group[0].id)


class ProfileDb(object):
    """Profile entries, kept sorted by duration for range lookups."""

    def __init__(self, entries, window_us=DEFAULT_WINDOW_US):
        entries = sorted((ProfileEntry(*e) for e in entries), key=lambda e: (e.duration_windows, e.label,
                                                                              e.config_id))
        if not entries:
            raise ProfileError("A profile needs at least one entry")
        if any(not e.duration_windows > 0 for e in entries):
            raise ProfileError("Profile durations must be positive")
        self._entries = tuple(entries)
        self._durations = np.array([e.duration_windows for e in entries])
        self._mean_bw = np.array([e.mean_bw for e in entries])
        self.window_us = window_us

    @property
    def entries(self):
        return self._entries

    @property
    def max_duration(self):
        return float(self._durations[-1])

    def match(self, duration, mean_bw, duration_tolerance, bw_tolerance):
        """
        Index of the entry closest in duration among those within duration_tolerance windows whose mean
        bandwidth is within bw_tolerance (relative); -1 if there is none.
        """
        lo = np.searchsorted(self._durations, duration - duration_tolerance, side="left")
        hi = np.searchsorted(self._durations, duration + duration_tolerance, side="right")
        if lo >= hi:
            return -1
        expected = self._mean_bw[lo:hi]
        ok = np.abs(mean_bw - expected) <= bw_tolerance * np.maximum(expected, 1.0)
        if not ok.any():
            return -1
        candidates = np.flatnonzero(ok) + lo
        return int(candidates[np.argmin(np.abs(self._durations[candidates] - duration))])

    def save(self, path):
        path = Path(str(path))
        with atomic_open(path) as fout:
            fout.write(json.dumps({"window_us": self.window_us, "entries": [e._asdict() for e in self._entries]},
                                  cls=ToJsonEncoder, sort_keys=True, indent=1))
        return path

    @classmethod
    def load(cls, path):
        path = Path(str(path))
        if not path.exists():
            raise ProfileError("Profile database does not exist: {0}".format(path))
        try:
            with io.open(str(path), "r", encoding="utf-8") as fin:
                values = json.load(fin)
            entries = [ProfileEntry(**e) for e in values["entries"]]
        except (ValueError, KeyError, TypeError) as e:
            raise ProfileError("Malformed profile database {0}: {1}".format(path, e), e)
        return cls(entries, values.get("window_us", DEFAULT_WINDOW_US))

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __repr__(self):
        return "ProfileDb({0} entries)".format(len(self._entries))


def profile_configs(layer, npu, tuned=None, reference=None, configs_per_layer=DEFAULT_CONFIGS_PER_LAYER):
    """The configs profiled for a layer: tuned, reference (when legal), then the first few other legal ones."""
    chosen = []
    for cfg in (tuned, reference):
        if cfg is None:
            continue
        try:
            chosen.append(check_legal(layer, cfg, npu))
        except TileConfigError:
            _get_logger().debug("Layer %d: config %s is not legal here, not profiled", layer.id, tuple(cfg))
    extra = 0
    for cfg in enumerate_tile_configs(layer, npu):
        if extra >= configs_per_layer:
            break
        if cfg not in chosen:
            chosen.append(cfg)
            extra += 1
    unique = []
    for cfg in chosen:
        if cfg not in unique:
            unique.append(cfg)
    return unique


def build_profile_db(models, npu, schedules=None, reference_schedules=None,
                     configs_per_layer=DEFAULT_CONFIGS_PER_LAYER, window_us=DEFAULT_WINDOW_US, workers=1):
    """
    Simulate every layer group of every model in isolation under each profiled config.

    :param schedules: model name -> TileSchedule from the tuner (optional).
    :param reference_schedules: model name -> reference TileSchedule (optional).
    """
    models = list(models)
    if not models:
        raise ProfileError("Cannot profile an empty list of models")
    schedules = schedules or {}
    reference_schedules = reference_schedules or {}

    tasks = []
    seen = set()
    for model in models:
        tuned = schedules.get(model.name, {})
        reference = reference_schedules.get(model.name, {})
        for group in layer_groups(model):
            layer = group[0]
            for cfg in profile_configs(layer, npu, tuned.get(layer.id), reference.get(layer.id), configs_per_layer):
                key = (_group_key(group), tuple(cfg))
                if key in seen:
                    continue
                seen.add(key)
                tasks.append((model.name, group, cfg, npu, window_us))

    outcomes = map_ordered(_profile_task, tasks, workers)
    failed = [o for o in outcomes if o.failed]
    if failed:
        for o in failed:
            _get_logger().error("Profiling %s layer %d failed:\n%s", o.item[0], o.item[1][0].id, o.traceback)
        raise ExperimentError("Profiling failed for {0} layer group(s)".format(len(failed)),
                              [o.exception for o in failed])

    db = ProfileDb([o.value for o in outcomes], window_us)
    _get_logger().info("Profiled %d layer-group configurations over %d model(s)", len(db), len(models))
    return db
