# coding=utf-8
"""This module contains the bag-of-words vocabulary learned from segment features."""

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

from sklearn.cluster import KMeans
from sklearn.preprocessing import StandardScaler

# Local imports
from ..exceptions import ProfileError
from ._features import default_mask, feature_matrix

DEFAULT_K = 16
DEFAULT_MAX_ITER = 100


def _get_logger():
    return logging.getLogger("npuleak.features")


class Codebook(object):
    """
    k centroids in standardised feature space, with the per-dimension mean and scale used to get there.

    collapsed is set when the data had fewer than the requested number of distinct points.
    """

    def __init__(self, centroids, mean, scale, mask=None, dwt="energy", requested_k=None):
        self.centroids = np.asarray(centroids, dtype=float)
        self.mean = np.asarray(mean, dtype=float)
        self.scale = np.asarray(scale, dtype=float)
        self.mask = tuple(mask or default_mask())
        self.dwt = dwt
        self.requested_k = requested_k or len(self.centroids)
        if len(self.centroids) == 0:
            raise ProfileError("A codebook needs at least one centroid")
        if np.any(self.scale == 0):
            raise ValueError("Feature scale must not contain zeros")

    @property
    def k(self):
        return len(self.centroids)

    @property
    def collapsed(self):
        return self.k < self.requested_k

    def standardise(self, vectors):
        return (np.atleast_2d(vectors) - self.mean) / self.scale

    def assign(self, features):
        """Nearest centroid of each feature (WindowFeatures or raw vectors); ties go to the lower index."""
        vectors = _as_matrix(features, self.mask, self.dwt)
        if len(vectors) == 0:
            return np.zeros(0, dtype=np.int64)
        scaled = self.standardise(vectors)
        distances = ((scaled[:, None, :] - self.centroids[None, :, :])**2).sum(axis=2)
        return np.argmin(distances, axis=1)

    def _to_jsonable(self):
        return collections.OrderedDict([("centroids", self.centroids), ("mean", self.mean), ("scale", self.scale),
                                        ("mask", list(self.mask)), ("dwt", self.dwt),
                                        ("requested_k", self.requested_k)])

    @classmethod
    def from_dict(cls, values):
        return cls(values["centroids"], values["mean"], values["scale"], values.get("mask"),
                   values.get("dwt", "energy"), values.get("requested_k"))


class BowHistogram(collections.namedtuple("BowHistogram", ["counts", "normalized"])):
    """Assignment counts over a codebook, and the same counts as a distribution."""
    __slots__ = ()

    @classmethod
    def from_assignments(cls, assignments, k):
        counts = np.bincount(np.asarray(assignments, dtype=np.int64), minlength=k)
        total = counts.sum()
        normalized = counts / float(total) if total else np.zeros(k)
        return cls(counts, normalized)


def _as_matrix(features, mask, dwt):
    if isinstance(features, np.ndarray):
        return np.atleast_2d(features).astype(float)
    features = list(features)
    if not features:
        return np.zeros((0, len(mask)))
    if hasattr(features[0], "vector"):
        return feature_matrix(features, mask, dwt)
    return np.atleast_2d(np.asarray(features, dtype=float))


def _farthest_point_init(points, k, rng):
    """A seeded first centre, then repeatedly the point farthest from every chosen centre (lowest index on ties)."""
    chosen = [rng.randint(len(points))]
    nearest = ((points - points[chosen[0]])**2).sum(axis=1)
    while len(chosen) < k:
        chosen.append(int(np.argmax(nearest)))
        nearest = np.minimum(nearest, ((points - points[chosen[-1]])**2).sum(axis=1))
    return points[chosen]


def build_codebook(features, k=DEFAULT_K, seed=0, mask=None, dwt="energy", max_iter=DEFAULT_MAX_ITER):
    """
    Learn a k-word vocabulary: standardise, then k-means from a seeded farthest-point start.

    When the data has fewer than k distinct points the codebook gets one centroid per distinct point and is
    flagged as collapsed.
    """
    if k < 1:
        raise ValueError("k must be at least 1, got {0!r}".format(k))
    mask = tuple(mask or default_mask())
    vectors = _as_matrix(features, mask, dwt)
    if len(vectors) < k:
        raise ProfileError("Need at least k={0} feature vectors to build a codebook, got {1}".format(k, len(vectors)))

    scaler = StandardScaler().fit(vectors)
    scaled = scaler.transform(vectors)
    distinct = np.unique(scaled, axis=0)
    k_used = min(k, len(distinct))
    if k_used < k:
        _get_logger().warning("Only %d distinct feature vectors; codebook reduced from %d to %d words", len(distinct),
                              k, k_used)

    rng = np.random.RandomState(seed)
    init = _farthest_point_init(distinct, k_used, rng)
    if k_used == len(distinct):
        centroids = init
    else:
        kmeans = KMeans(n_clusters=k_used, init=init, n_init=1, max_iter=max_iter, random_state=seed)
        centroids = kmeans.fit(scaled).cluster_centers_
    _get_logger().debug("Codebook: %d words over %d vectors of %d features", k_used, len(vectors), vectors.shape[1])
    return Codebook(centroids, scaler.mean_, scaler.scale_, mask, dwt, requested_k=k)


def bow_encode(features, codebook):
    """Histogram of nearest-centroid assignments of a feature sequence."""
    return BowHistogram.from_assignments(codebook.assign(features), codebook.k)
