# coding=utf-8
"""This module contains the per-segment statistics and wavelet features."""

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
import csv

# Third-party imports
import numpy as np

from pathlib2 import Path

# Local imports
from .._atomic import atomic_open
from ._dwt import haar_dwt, level_energies

DEFAULT_LEVELS = 3
STAT_NAMES = ("total_bytes", "median_bw", "peak_bw", "std_bw", "mean_bw")


def energy_names(levels=DEFAULT_LEVELS):
    return ("energy_a{0}".format(levels), ) + tuple("energy_d{0}".format(level) for level in range(1, levels + 1))


def default_mask(levels=DEFAULT_LEVELS):
    """Feature names used unless a mask is configured: every statistic except the mean, and every level energy."""
    return STAT_NAMES[:4] + energy_names(levels)


class WindowFeatures(
        collections.namedtuple("WindowFeatures",
                               ["total_bytes", "median_bw", "peak_bw", "std_bw", "mean_bw", "dwt_approx",
                                "dwt_detail"])):
    """Statistics (bytes per sampling window) and Haar coefficients of one trace segment."""
    __slots__ = ()

    @property
    def levels(self):
        return len(self.dwt_detail)

    @property
    def energies(self):
        return level_energies(self.dwt_approx, self.dwt_detail)

    @property
    def coefficients(self):
        """Approximation then detail coefficients, coarsest level first."""
        return np.concatenate([self.dwt_approx] + list(self.dwt_detail[::-1]))

    def named(self):
        values = dict(zip(STAT_NAMES, self[:5]))
        values.update(zip(energy_names(self.levels), self.energies))
        return values

    def vector(self, mask=None, dwt="energy"):
        """
        The feature vector used for clustering.

        :param mask: feature names to keep, in order; defaults to default_mask().
        :param dwt: "energy" for one energy per level (selected through the mask) or "coefficients" to append
                    every coefficient after the masked features.
        """
        mask = mask or default_mask(self.levels)
        named = self.named()
        unknown = [name for name in mask if name not in named]
        if unknown:
            raise ValueError("Unknown feature names: {0}".format(", ".join(unknown)))
        values = [named[name] for name in mask]
        if dwt == "coefficients":
            return np.concatenate([values, self.coefficients])
        if dwt != "energy":
            raise ValueError("dwt must be 'energy' or 'coefficients', got {0!r}".format(dwt))
        return np.asarray(values, dtype=float)


def extract_features(segment, levels=DEFAULT_LEVELS):
    """Statistics and Haar decomposition of a non-empty segment of per-window byte counts."""
    segment = np.asarray(segment, dtype=float)
    if segment.size == 0:
        raise ValueError("Cannot extract features from an empty segment")
    approx, details = haar_dwt(segment, levels)
    return WindowFeatures(total_bytes=float(segment.sum()),
                          median_bw=float(np.median(segment)),
                          peak_bw=float(segment.max()),
                          std_bw=float(segment.std()),
                          mean_bw=float(segment.mean()),
                          dwt_approx=approx,
                          dwt_detail=tuple(details))


def feature_matrix(features, mask=None, dwt="energy"):
    """Stack the vectors of a sequence of WindowFeatures into an (n, d) array."""
    features = list(features)
    if not features:
        return np.zeros((0, len(mask or default_mask())))
    return np.vstack([f.vector(mask, dwt) for f in features])


def feature_columns(features, mask=None, dwt="energy"):
    mask = list(mask or default_mask(features[0].levels if features else DEFAULT_LEVELS))
    if dwt == "coefficients" and features:
        mask += ["coef_{0}".format(i) for i in range(len(features[0].coefficients))]
    return mask


def write_features_csv(features, path, starts=None, mask=None, dwt="energy"):
    """
    One row per segment: its start window, then the masked statistics and level energies in mask order, then
    (dwt="coefficients") every coefficient, coarsest level first.
    """
    features = list(features)
    starts = list(range(len(features))) if starts is None else list(starts)
    path = Path(str(path))
    with atomic_open(path, newline="") as csvfile:
        writer = csv.writer(csvfile, dialect="excel", lineterminator="\n")
        writer.writerow(["segment_start"] + feature_columns(features, mask, dwt))
        for start, row in zip(starts, feature_matrix(features, mask, dwt)):
            writer.writerow([start] + ["{0:.9g}".format(v) for v in row])
    return path
