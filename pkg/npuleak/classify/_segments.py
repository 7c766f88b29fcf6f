# coding=utf-8
"""This module turns a trace segment into classifier inputs."""

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
from ..features import extract_features, haar_dwt

DEFAULT_POINTS = 64
SEGMENT_STAT_NAMES = ("total_bytes", "median_bw", "peak_bw", "std_bw", "mean_bw", "duration")


class FeatureLayout(collections.namedtuple("FeatureLayout", ["with_dwt", "points", "levels"])):
    """
    Layout of one sample: the tabular vector is the segment statistics and duration, followed (with_dwt) by
    every Haar coefficient of the resampled segment; the series input has the resampled segment as channel 0
    and (with_dwt) its Haar coefficients as channel 1.
    """
    __slots__ = ()

    def __new__(cls, with_dwt=True, points=DEFAULT_POINTS, levels=3):
        if points % 2**levels:
            raise ValueError("points ({0}) must be a multiple of 2**levels ({1})".format(points, 2**levels))
        return super(FeatureLayout, cls).__new__(cls, bool(with_dwt), int(points), int(levels))

    @property
    def names(self):
        names = list(SEGMENT_STAT_NAMES)
        if self.with_dwt:
            names += ["dwt_{0}".format(i) for i in range(self.points)]
        return names

    @property
    def n_tabular(self):
        return len(SEGMENT_STAT_NAMES) + (self.points if self.with_dwt else 0)

    @property
    def n_scalar(self):
        return len(SEGMENT_STAT_NAMES)

    @property
    def n_channels(self):
        return 2 if self.with_dwt else 1

    @property
    def duration_index(self):
        return SEGMENT_STAT_NAMES.index("duration")


def resample_segment(signal, points=DEFAULT_POINTS):
    """Mean of each of points near-equal chunks; shorter segments are first padded with their last value."""
    signal = np.asarray(signal, dtype=float)
    if signal.size == 0:
        raise ValueError("Cannot resample an empty segment")
    if len(signal) < points:
        signal = np.pad(signal, (0, points - len(signal)), mode="edge")
    return np.array([chunk.mean() for chunk in np.array_split(signal, points)])


def _coefficients(resampled, levels):
    approx, details = haar_dwt(resampled, levels)
    return np.concatenate([approx] + list(details[::-1]))


def segment_inputs(signal, layout):
    """(tabular vector, series array of shape (channels, points)) of one segment."""
    stats = extract_features(signal, layout.levels)
    scalars = [stats.total_bytes, stats.median_bw, stats.peak_bw, stats.std_bw, stats.mean_bw, float(len(signal))]
    resampled = resample_segment(signal, layout.points)
    if layout.with_dwt:
        coefficients = _coefficients(resampled, layout.levels)
        return np.concatenate([scalars, coefficients]), np.vstack([resampled, coefficients])
    return np.asarray(scalars, dtype=float), resampled[None, :]
