# coding=utf-8
"""
This module contains the layer-classification dataset and the simulated runs it is built from.

A class is a (layer group dimensions, tile config) pair: what the attacker wants to recover from a segment.
Samples of a class are repeated isolated simulations of that layer group, each with its own noise seed.
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
import logging

# Third-party imports
import numpy as np

from sklearn.model_selection import train_test_split

# Local imports
from ..catalog import ModelSpec, TileConfig
from ..detection import group_label, layer_groups
from ..exceptions import DatasetError
from ..sim import DEFAULT_WINDOW_US, inject_noise, simulate_inference
from ._segments import FeatureLayout, segment_inputs

DEFAULT_REPEATS = 20
DEFAULT_NOISE = 0.05


def _get_logger():
    return logging.getLogger("npuleak.classify")


class SegmentRun(
        collections.namedtuple("SegmentRun", ["label", "type_label", "config_id", "model", "layer_id", "signal"])):
    """One simulated trace segment of a layer group, with its class."""
    __slots__ = ()


def class_label(group, cfg):
    return "{0} | {1}".format(group_label(group), TileConfig(*cfg).clamp(group[0]).config_id)


def profile_runs(model, schedule, npu, repeats=DEFAULT_REPEATS, noise=DEFAULT_NOISE, seed=0,
                 window_us=DEFAULT_WINDOW_US):
    """
    repeats noisy isolated runs of every distinct class of model under schedule.

    Layer groups with the same dimensions and config are one class and are simulated once.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1, got {0!r}".format(repeats))
    rng = np.random.RandomState(seed)
    runs = []
    seen = set()
    for group in layer_groups(model):
        cfg = schedule[group[0].id]
        label = class_label(group, cfg)
        key = (tuple(layer.dims_key for layer in group), label)
        if key in seen:
            continue
        seen.add(key)
        isolated = ModelSpec("{0}:{1}".format(model.name, group[0].id), group, group[0].element_size)
        trace = simulate_inference(isolated, {group[0].id: cfg}, npu, window_us=window_us).trace
        noise_seeds = rng.randint(0, 2**31 - 1, size=repeats)
        for noise_seed in noise_seeds:
            noisy = inject_noise(trace, noise, int(noise_seed)) if noise else trace
            runs.append(
                SegmentRun(label, group_label(group), TileConfig(*cfg).clamp(group[0]).config_id, model.name,
                           group[0].id, noisy.read_bytes))
    _get_logger().debug("'%s': %d runs over %d classes", model.name, len(runs), len(seen))
    return runs


class Dataset(object):
    """Tabular and series inputs, integer labels and per-sample metadata for one feature layout."""

    def __init__(self, tabular, series, labels, label_names, layout, meta=None):
        self.tabular = np.asarray(tabular, dtype=float)
        self.series = np.asarray(series, dtype=float)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.label_names = list(label_names)
        self.layout = layout
        self.meta = list(meta) if meta is not None else [{} for _ in range(len(self.labels))]

        n = len(self.labels)
        if len(self.tabular) != n or len(self.series) != n or len(self.meta) != n:
            raise DatasetError("Dataset columns disagree on the number of samples")
        if n and self.tabular.shape[1] != layout.n_tabular:
            raise DatasetError("Tabular features have {0} columns, layout expects {1}".format(
                self.tabular.shape[1], layout.n_tabular))
        if n and self.series.shape[1:] != (layout.n_channels, layout.points):
            raise DatasetError("Series inputs have shape {0}, layout expects {1}".format(
                self.series.shape[1:], (layout.n_channels, layout.points)))
        if n and (self.labels.min() < 0 or self.labels.max() >= len(self.label_names)):
            raise DatasetError("Labels out of range for {0} classes".format(len(self.label_names)))

    @property
    def n_classes(self):
        return len(self.label_names)

    @property
    def durations(self):
        return self.tabular[:, self.layout.duration_index]

    def class_counts(self):
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.tabular[indices], self.series[indices], self.labels[indices], self.label_names,
                       self.layout, [self.meta[i] for i in indices])

    def split(self, test_size=0.2, seed=0):
        """Seeded stratified (train, test) split."""
        if len(np.unique(self.labels)) < 2:
            raise DatasetError("Need at least two classes to split a dataset")
        train, test = train_test_split(np.arange(len(self)), test_size=test_size, random_state=seed,
                                       stratify=self.labels)
        return self.subset(np.sort(train)), self.subset(np.sort(test))

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return "Dataset({0} samples, {1} classes, with_dwt={2})".format(len(self), self.n_classes,
                                                                       self.layout.with_dwt)


def build_dataset(runs, with_dwt=True, layout=None):
    """One sample per run; classes are the distinct run labels, sorted."""
    runs = list(runs)
    layout = layout or FeatureLayout(with_dwt)
    label_names = sorted(set(run.label for run in runs))
    if len(label_names) < 2:
        raise DatasetError("Need runs of at least two classes, got {0}".format(len(label_names)))
    index = dict((name, i) for i, name in enumerate(label_names))

    tabular, series = zip(*[segment_inputs(run.signal, layout) for run in runs])
    meta = [{
        "model": run.model,
        "layer_id": run.layer_id,
        "type_label": run.type_label,
        "config_id": run.config_id
    } for run in runs]
    return Dataset(np.vstack(tabular), np.stack(series), [index[run.label] for run in runs], label_names, layout,
                   meta)
