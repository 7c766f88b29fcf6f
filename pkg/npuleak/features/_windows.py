# coding=utf-8
"""This module contains the sliding-window segmentation of traces."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Third-party imports
import numpy as np

DEFAULT_WIN_LEN = 64
DEFAULT_STRIDE = 16


def window_starts(length, win_len=DEFAULT_WIN_LEN, stride=DEFAULT_STRIDE):
    if win_len < 2:
        raise ValueError("win_len must be at least 2, got {0!r}".format(win_len))
    if stride < 1:
        raise ValueError("stride must be at least 1, got {0!r}".format(stride))
    if length < win_len:
        return []
    return list(range(0, length - win_len + 1, stride))


def sliding_windows(trace, win_len=DEFAULT_WIN_LEN, stride=DEFAULT_STRIDE):
    """
    Segments [i * stride, i * stride + win_len) of the read channel; a trailing partial segment is dropped.

    :param trace: a BandwidthTrace or a 1-d sequence of per-window byte counts.
    """
    signal = np.asarray(getattr(trace, "read_bytes", trace))
    return [signal[start:start + win_len] for start in window_starts(len(signal), win_len, stride)]
