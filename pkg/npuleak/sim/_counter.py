# coding=utf-8
"""
This module contains the bandwidth counter an attacker reads, plus trace noise and CSV import/export.

The counter accumulates the bytes moved over the memory interface and is read once per sampling window
(4 us, i.e. 250 kHz, by default). A transaction that straddles windows is split between them by cycle overlap.
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
import csv

# Third-party imports
import numpy as np

from pathlib2 import Path

# Local imports
from .._atomic import atomic_open

DEFAULT_WINDOW_US = 4.0
DEFAULT_CLOCK_HZ = 100e6
TRACE_COLUMNS = ("window_index", "time_us", "read_bytes", "write_bytes")


class BandwidthTrace(object):
    """Per-window read and write byte counts."""

    def __init__(self, window_us, read_bytes, write_bytes=None):
        if not window_us > 0:
            raise ValueError("window_us must be positive, got {0!r}".format(window_us))
        read_bytes = np.array(read_bytes, dtype=np.int64)
        write_bytes = np.zeros_like(read_bytes) if write_bytes is None else np.array(write_bytes, dtype=np.int64)
        if read_bytes.shape != write_bytes.shape or read_bytes.ndim != 1:
            raise ValueError("read_bytes and write_bytes must be 1-d sequences of the same length")
        if (read_bytes < 0).any() or (write_bytes < 0).any():
            raise ValueError("Byte counts must not be negative")
        read_bytes.setflags(write=False)
        write_bytes.setflags(write=False)
        self._window_us = float(window_us)
        self._read = read_bytes
        self._write = write_bytes

    @property
    def window_us(self):
        return self._window_us

    @property
    def read_bytes(self):
        return self._read

    @property
    def write_bytes(self):
        return self._write

    @property
    def time_us(self):
        return np.arange(len(self)) * self._window_us

    @property
    def read_Bps(self):
        """Read bandwidth of every window in bytes per second."""
        return self._read / (self._window_us * 1e-6)

    def span(self, start, end):
        return BandwidthTrace(self._window_us, self._read[start:end], self._write[start:end])

    def __len__(self):
        return len(self._read)

    def __eq__(self, other):
        if not isinstance(other, BandwidthTrace):
            return NotImplemented
        return (self._window_us == other._window_us and np.array_equal(self._read, other._read) and
                np.array_equal(self._write, other._write))

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return "BandwidthTrace({0} windows of {1} us, {2} read bytes)".format(len(self), self._window_us,
                                                                            int(self._read.sum()))


def window_cycles(window_us, clock_hz):
    if not window_us > 0:
        raise ValueError("window_us must be positive, got {0!r}".format(window_us))
    return max(1, int(round(window_us * clock_hz / 1e6)))


def sample_counter(txns, window_us=DEFAULT_WINDOW_US, clock_hz=DEFAULT_CLOCK_HZ, n_windows=None):
    """
    Bin a TransactionLog into a BandwidthTrace.

    Bytes are attributed pro-rata by cycle overlap, rounding the running total so each transaction's bytes are
    preserved exactly. Authenticity is not visible to the counter.

    :param n_windows: minimum trace length; the trace always covers the last transaction.
    """
    width = window_cycles(window_us, clock_hz)
    total = 0 if len(txns) == 0 else -(-txns.end_cycle // width)
    total = max(total, n_windows or 0, int(txns.t_start.max()) // width + 1 if len(txns) else 0)
    read = _bin(txns.reads(), width, total)
    write = _bin(txns.writes(), width, total)
    return BandwidthTrace(window_us, read, write)


def _bin(txns, width, total):
    out = np.zeros(total, dtype=np.int64)
    if len(txns) == 0:
        return out

    start = txns.t_start
    duration = txns.duration
    nbytes = txns.bytes
    end = start + duration

    first = start // width
    last = np.where(duration > 0, (end - 1) // width, first)
    counts = last - first + 1

    owner = np.repeat(np.arange(len(txns)), counts)
    offset = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    window = first[owner] + offset

    dur = duration[owner]
    elapsed = np.minimum((window + 1) * width, end[owner]) - start[owner]
    # rounded running total of bytes delivered by the end of each window
    delivered = np.where(dur > 0, (2 * nbytes[owner] * elapsed + dur) // np.maximum(2 * dur, 1), nbytes[owner])
    previous = np.where(offset > 0, np.roll(delivered, 1), 0)

    np.add.at(out, window, delivered - previous)
    return out


def inject_noise(trace, amplitude, seed):
    """
    Perturb every window by a multiplicative factor drawn uniformly from [1 - amplitude, 1 + amplitude].

    Counts stay integers: x becomes x + trunc(x * (f - 1)), so every window stays within amplitude of the
    original and never goes negative.
    """
    if not 0 <= amplitude < 1:
        raise ValueError("amplitude must lie in [0, 1), got {0!r}".format(amplitude))
    if amplitude == 0:
        return BandwidthTrace(trace.window_us, trace.read_bytes, trace.write_bytes)

    rng = np.random.RandomState(seed)
    noisy = []
    for counts in (trace.read_bytes, trace.write_bytes):
        factor = rng.uniform(1.0 - amplitude, 1.0 + amplitude, size=len(counts))
        noisy.append(np.maximum(counts + np.trunc(counts * (factor - 1.0)).astype(np.int64), 0))
    return BandwidthTrace(trace.window_us, noisy[0], noisy[1])


def count_read_bursts(trace, start=0, end=None, threshold=0):
    """
    Number of runs of windows whose read count exceeds threshold within [start, end).

    Inside a compute-bound layer each run is one tile load, so the count exposes the layer's tile count.
    """
    active = trace.read_bytes[start:end] > threshold
    if not active.any():
        return 0
    return int(active[0]) + int(np.count_nonzero(active[1:] & ~active[:-1]))


def write_trace_csv(trace, path):
    """Write a trace as CSV (window_index,time_us,read_bytes,write_bytes); returns the Path written."""
    path = Path(str(path))
    with atomic_open(path, newline="") as csvfile:
        writer = csv.writer(csvfile, dialect="excel", lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for index, (read, write) in enumerate(zip(trace.read_bytes, trace.write_bytes)):
            writer.writerow([index, "{0:g}".format(index * trace.window_us), int(read), int(write)])
    return path


def read_trace_csv(path):
    """Read a trace written by write_trace_csv; the window length comes from the time_us column."""
    path = Path(str(path))
    with open(str(path), "r", newline="", encoding="utf-8") as csvfile:
        reader = csv.reader(csvfile)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != TRACE_COLUMNS:
            raise ValueError("{0}: expected header {1}".format(path, ",".join(TRACE_COLUMNS)))
        rows = [row for row in reader if row]

    if not rows:
        return BandwidthTrace(DEFAULT_WINDOW_US, [])
    for number, row in enumerate(rows):
        if int(row[0]) != number:
            raise ValueError("{0}: window_index {1} out of sequence".format(path, row[0]))
    window_us = float(rows[1][1]) if len(rows) > 1 else DEFAULT_WINDOW_US
    return BandwidthTrace(window_us, [int(row[2]) for row in rows], [int(row[3]) for row in rows])
