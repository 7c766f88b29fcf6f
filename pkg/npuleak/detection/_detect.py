# coding=utf-8
"""
This module contains the layer-boundary detector.

Sliding windows of the trace are mapped to codewords. Where the codeword histogram of the windows before a
position differs strongly from the histogram of the windows after it, a layer boundary is a candidate. Candidates
are then validated against the offline profile: the trace is cut at the candidates that best explain it as a
sequence of profiled layer segments.
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

from scipy.stats import median_abs_deviation

# Local imports
from ..exceptions import ProfileError
from ..features import BowHistogram, extract_features, sliding_windows, window_starts


def _get_logger():
    return logging.getLogger("npuleak.detection")


class DetectorParams(
        collections.namedtuple("DetectorParams", [
            "win_len", "stride", "levels", "context", "threshold_c", "mad_floor", "duration_tolerance",
            "bw_tolerance", "cap_quantile"
        ])):
    """
    Detector settings. context is the number of sliding windows on each side of a position whose codeword
    histograms are compared; the threshold is median + threshold_c * max(MAD, mad_floor) over all positions, but
    no higher than the cap_quantile quantile of the positive statistic values.
    duration_tolerance is in sampling windows; bw_tolerance is relative.
    """
    __slots__ = ()

    def __new__(cls, win_len=64, stride=16, levels=3, context=8, threshold_c=3.0, mad_floor=0.25,
                duration_tolerance=16, bw_tolerance=0.15, cap_quantile=0.9):
        if context < 1:
            raise ValueError("context must be at least 1, got {0!r}".format(context))
        if duration_tolerance < 0 or bw_tolerance < 0:
            raise ValueError("Tolerances must not be negative")
        if not 0 < cap_quantile <= 1:
            raise ValueError("cap_quantile must be in (0, 1], got {0!r}".format(cap_quantile))
        return super(DetectorParams, cls).__new__(cls, win_len, stride, levels, context, threshold_c, mad_floor,
                                                  duration_tolerance, bw_tolerance, cap_quantile)


class BoundarySet(collections.namedtuple("BoundarySet", ["positions", "confidence"])):
    """Detected boundaries: strictly increasing window indices, each with a confidence in [0, 1]."""
    __slots__ = ()

    def __new__(cls, positions=(), confidence=None):
        positions = [int(p) for p in positions]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("Boundary positions must be strictly increasing")
        confidence = [1.0] * len(positions) if confidence is None else [float(c) for c in confidence]
        if len(confidence) != len(positions):
            raise ValueError("Need one confidence per position")
        return super(BoundarySet, cls).__new__(cls, tuple(positions), tuple(confidence))

    def __len__(self):
        return len(self.positions)


def encode_windows(trace, codebook, params):
    """Codeword of every sliding window, and the window start positions."""
    segments = sliding_windows(trace, params.win_len, params.stride)
    starts = window_starts(len(getattr(trace, "read_bytes", trace)), params.win_len, params.stride)
    features = [extract_features(segment, params.levels) for segment in segments]
    return codebook.assign(features), starts


def change_statistic(codewords, k, context):
    """
    L1 distance between the normalised codeword histograms of the context windows before and after each
    position; positions too close to either end score 0.
    """
    codewords = np.asarray(codewords, dtype=np.int64)
    n = len(codewords)
    stat = np.zeros(n)
    if n < 2 * context:
        return stat
    onehot = np.zeros((n + 1, k))
    onehot[np.arange(1, n + 1), codewords] = 1.0
    cumulative = np.cumsum(onehot, axis=0)
    for j in range(context, n - context + 1):
        left = BowHistogram.from_assignments(codewords[j - context:j], k).normalized
        right = (cumulative[j + context] - cumulative[j]) / float(context)
        stat[j] = np.abs(left - right).sum()
    return stat


def adaptive_threshold(stat, threshold_c, mad_floor, cap_quantile=1.0):
    """
    median + threshold_c * max(MAD, mad_floor), capped at the cap_quantile quantile of the positive values.

    The statistic is bounded (an L1 distance of two distributions never exceeds 2), so on busy traces the
    uncapped threshold can lie above every value.
    """
    stat = np.asarray(stat, dtype=float)
    threshold = float(np.median(stat) + threshold_c * max(median_abs_deviation(stat), mad_floor))
    positive = stat[stat > 0]
    if len(positive):
        threshold = min(threshold, float(np.quantile(positive, cap_quantile)))
    return threshold


def _local_maxima(stat, threshold):
    above = stat >= threshold
    peaks = []
    j = 0
    while j < len(stat):
        if not above[j]:
            j += 1
            continue
        end = j
        while end < len(stat) and above[end]:
            end += 1
        peaks.append(j + int(np.argmax(stat[j:end])))
        j = end
    return peaks


def refine_position(signal, center, radius, half):
    """Position within center +- radius with the largest difference of means between the half windows on each side."""
    signal = np.asarray(signal, dtype=float)
    cumulative = np.concatenate([[0.0], np.cumsum(signal)])
    lo = max(half, center - radius)
    hi = min(len(signal) - half, center + radius)
    if lo > hi:
        return int(min(max(center, 1), len(signal) - 1))
    positions = np.arange(lo, hi + 1)
    left = (cumulative[positions] - cumulative[positions - half]) / half
    right = (cumulative[positions + half] - cumulative[positions]) / half
    return int(positions[np.argmax(np.abs(right - left))])


def burst_onsets(signal):
    """Windows where reads resume after an idle window."""
    signal = np.asarray(signal)
    return np.flatnonzero((signal[1:] > 0) & (signal[:-1] <= 0)) + 1


def find_candidates(trace, codebook, params):
    """
    Candidate boundary positions (window indices), before validation.

    Each peak of the change statistic contributes its refined position and every burst onset within one sliding
    window of it; validation picks among them.
    """
    signal = np.asarray(getattr(trace, "read_bytes", trace))
    codewords, starts = encode_windows(signal, codebook, params)
    stat = change_statistic(codewords, codebook.k, params.context)
    if not stat.any():
        return []
    threshold = adaptive_threshold(stat, params.threshold_c, params.mad_floor, params.cap_quantile)
    half = max(2, params.stride // 2)
    onsets = burst_onsets(signal)
    candidates = set()
    for j in _local_maxima(stat, threshold):
        # boundary between the last window before j and window j
        center = starts[j] + (params.win_len - params.stride) // 2
        candidates.add(refine_position(signal, center, params.win_len, half))
        lo, hi = np.searchsorted(onsets, [center - params.win_len, center + params.win_len], side="left")
        candidates.update(int(p) for p in onsets[lo:hi])
    return sorted(p for p in candidates if 0 < p < len(signal))


def validate_candidates(signal, candidates, profile, params):
    """
    Best cut of [0, len) at a subset of candidates, scoring +1 per segment that matches a profile entry in
    duration and mean bandwidth and -1 per segment that does not. Returns the kept cut positions and, for
    each, the fraction of its two neighbouring segments that matched.
    """
    signal = np.asarray(signal, dtype=float)
    cumulative = np.concatenate([[0.0], np.cumsum(signal)])
    nodes = [0] + [c for c in candidates if 0 < c < len(signal)] + [len(signal)]
    n = len(nodes)
    limit = profile.max_duration + params.duration_tolerance

    best = [-np.inf] * n
    back = [-1] * n
    matched_edge = {}
    best[0] = 0.0
    for b in range(1, n):
        for a in range(b - 1, -1, -1):
            duration = nodes[b] - nodes[a]
            if duration > limit and a < b - 1:
                # longer edges cannot match; the adjacent edge is the fallback
                break
            matched = duration <= limit and profile.match(
                duration, (cumulative[nodes[b]] - cumulative[nodes[a]]) / duration, params.duration_tolerance,
                params.bw_tolerance) >= 0
            score = best[a] + (1.0 if matched else -1.0)
            if score > best[b]:
                best[b] = score
                back[b] = a
                matched_edge[b] = matched

    path = [n - 1]
    while path[-1] > 0:
        path.append(back[path[-1]])
    path.reverse()

    kept = []
    confidence = []
    for i in range(1, len(path) - 1):
        before, after = matched_edge[path[i]], matched_edge[path[i + 1]]
        if before or after:
            kept.append(nodes[path[i]])
            confidence.append((int(before) + int(after)) / 2.0)
    return kept, confidence


def detect_boundaries(trace, codebook, profile, params=None):
    """Candidate boundaries from the codeword change statistic, validated against the profile."""
    params = params or DetectorParams()
    if codebook is None or codebook.k < 1:
        raise ProfileError("Boundary detection needs a non-empty codebook")
    if profile is None or len(profile) == 0:
        raise ProfileError("Boundary detection needs a non-empty profile")
    signal = np.asarray(getattr(trace, "read_bytes", trace))
    if len(signal) < params.win_len:
        raise ValueError("Trace of {0} windows is shorter than one sliding window ({1})".format(
            len(signal), params.win_len))

    candidates = find_candidates(signal, codebook, params)
    kept, confidence = validate_candidates(signal, candidates, profile, params)
    if candidates and not kept:
        _get_logger().warning("None of %d boundary candidates survived validation", len(candidates))
    _get_logger().debug("Detection: %d candidates, %d kept", len(candidates), len(kept))
    return BoundarySet(kept, confidence)
