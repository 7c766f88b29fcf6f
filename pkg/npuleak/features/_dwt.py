# coding=utf-8
"""This module contains the Haar wavelet transform used for trace features."""

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
import pywt

_WAVELET = "haar"
_MODE = "periodization"


def pad_to_levels(signal, levels):
    """Pad signal with its last value up to a multiple of 2**levels."""
    signal = np.asarray(signal, dtype=float)
    block = 2**levels
    short = -len(signal) % block
    if short and len(signal):
        signal = np.pad(signal, (0, short), mode="edge")
    return signal


def haar_dwt(signal, levels=3):
    """
    Orthonormal Haar decomposition.

    :returns: (approx, details) where details[0] is the finest level and details[-1] the coarsest.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1, got {0!r}".format(levels))
    signal = pad_to_levels(signal, levels)
    if len(signal) == 0:
        raise ValueError("Cannot transform an empty signal")
    coeffs = pywt.wavedec(signal, _WAVELET, mode=_MODE, level=levels)
    return coeffs[0], coeffs[:0:-1]


def inverse_haar(approx, details):
    """Reconstruct a signal from haar_dwt output."""
    return pywt.waverec([np.asarray(approx, dtype=float)] + [np.asarray(d, dtype=float) for d in details[::-1]],
                        _WAVELET, mode=_MODE)


def level_energies(approx, details):
    """Energy (sum of squares) of the approximation and of each detail level, finest detail first."""
    return [float(np.dot(approx, approx))] + [float(np.dot(d, d)) for d in details]
