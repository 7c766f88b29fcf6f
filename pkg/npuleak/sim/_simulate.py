# coding=utf-8
"""This module contains the event-level simulation of tiled inference."""

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

# Local imports
from ..exceptions import ScheduleError, TileConfigError
from ._config import NpuConfig
from ._cost import elementwise_cycles, tile_cost
from ._counter import DEFAULT_WINDOW_US, inject_noise, sample_counter, window_cycles
from ._transactions import TransactionLog, TxnKind


def _get_logger():
    return logging.getLogger("npuleak.sim")


LayerSpan = collections.namedtuple("LayerSpan", ["layer_id", "start", "end"])


class DmaChannel(object):
    """An exclusive DMA channel that starts each transfer as soon as it is requested and the channel is free."""

    def __init__(self, npu, kind=TxnKind.READ):
        self._npu = npu
        self._kind = 0 if kind == TxnKind.READ else 1
        self._busy_until = 0
        self._rows = []

    def transfer(self, earliest, nbytes, layer_id):
        """Queue a transfer of nbytes requested at cycle earliest; returns the cycle it completes."""
        start = max(earliest, self._busy_until)
        duration = self._npu.dma_cycles(nbytes)
        self._rows.append((start, duration, nbytes, layer_id))
        self._busy_until = start + duration
        return self._busy_until

    def finish(self):
        """The channel's transactions, in issue order."""
        columns = list(zip(*self._rows)) or [(), (), (), ()]
        return TransactionLog(t_start=columns[0], duration=columns[1], bytes=columns[2],
                              kind=[self._kind] * len(self._rows), fake=[False] * len(self._rows),
                              layer_id=columns[3])


def run_tiled(model, schedule, npu, read_channel, write_channel):
    """
    Drive the double-buffered tile pipeline of every layer through the given channels.

    The load of tile k may start once tile k-2 has finished computing (two weight buffers); tile k computes once
    it is loaded and tile k-1 has finished. A layer's output is stored as one posted write when it finishes.

    :returns: (list of LayerSpan in cycles, total cycles)
    """
    t = 0
    spans = []
    for layer in model.layers:
        start = t
        if layer.loads_weights:
            cost = _layer_cost(model, schedule, layer, npu)
            computed = [start, start]
            for k in range(cost.num_tiles):
                loaded = read_channel.transfer(computed[-2], cost.bytes_per_tile, layer.id)
                computed.append(max(loaded, computed[-1]) + cost.compute_cycles)
            t = computed[-1]
        else:
            t = start + elementwise_cycles(layer, npu)
        write_channel.transfer(t, layer.output_bytes, layer.id)
        spans.append(LayerSpan(layer.id, start, t))
    return spans, t


def _layer_cost(model, schedule, layer, npu):
    cfg = schedule.get(layer.id)
    if cfg is None:
        raise ScheduleError("Schedule has no tile config for layer {0} of '{1}'".format(layer.id, model.name))
    try:
        return tile_cost(layer, cfg, npu)
    except TileConfigError as e:
        raise ScheduleError("Schedule for '{0}' is illegal on this NPU: {1}".format(model.name, e), e)


class SimResult(object):
    """
    Outcome of one simulated inference: the transaction log, the counter trace and per-layer ground truth.

    layer_spans holds (layer id, start window, end window) with the end exclusive; spans are contiguous and
    a very short layer may have an empty span. cycle_spans holds the same in cycles.
    """

    def __init__(self, model, trace, txns, cycle_spans, total_cycles, clock_hz):
        self._model = model
        self._trace = trace
        self._txns = txns
        self._cycle_spans = tuple(cycle_spans)
        self._total_cycles = total_cycles
        self._clock_hz = clock_hz

        width = window_cycles(trace.window_us, clock_hz)
        starts = [span.start // width for span in self._cycle_spans]
        ends = starts[1:] + [-(-total_cycles // width)]
        self._layer_spans = tuple(
            LayerSpan(span.layer_id, s, e) for span, s, e in zip(self._cycle_spans, starts, ends))

    @property
    def model(self):
        return self._model

    @property
    def trace(self):
        return self._trace

    @property
    def txns(self):
        return self._txns

    @property
    def layer_spans(self):
        return self._layer_spans

    @property
    def cycle_spans(self):
        return self._cycle_spans

    @property
    def total_cycles(self):
        return self._total_cycles

    @property
    def clock_hz(self):
        return self._clock_hz

    @property
    def weight_layer_spans(self):
        """Window spans of the weight-loading layers only, each extended to the next weight-loading layer."""
        weight_ids = set(layer.id for layer in self._model.weight_layers)
        starts = [span for span in self._layer_spans if span.layer_id in weight_ids]
        ends = [span.start for span in starts[1:]] + [self._layer_spans[-1].end]
        return tuple(LayerSpan(span.layer_id, span.start, end) for span, end in zip(starts, ends))

    @property
    def boundary_windows(self):
        """Ground-truth boundaries: the start window of every weight-loading layer after the first."""
        return [span.start for span in self.weight_layer_spans[1:]]

    def span_of(self, layer_id):
        for span in self._layer_spans:
            if span.layer_id == layer_id:
                return span
        raise KeyError("No layer {0} in this result".format(layer_id))

    def __repr__(self):
        return "SimResult({0!r}, {1} cycles, {2} windows)".format(self._model.name, self._total_cycles,
                                                                 len(self._trace))


def simulate_inference(model, schedule, npu=None, seed=0, noise=0.0, window_us=DEFAULT_WINDOW_US):
    """
    Simulate one inference of model under schedule.

    Every tile is one read transaction of bytes_per_tile; every layer's output is one write transaction. The
    result is deterministic for fixed arguments; seed only drives the counter noise (amplitude noise).
    """
    npu = npu or NpuConfig()
    read_channel = DmaChannel(npu, TxnKind.READ)
    write_channel = DmaChannel(npu, TxnKind.WRITE)
    spans, total = run_tiled(model, schedule, npu, read_channel, write_channel)

    txns = TransactionLog.concat([read_channel.finish(), write_channel.finish()])
    trace = sample_counter(txns, window_us, npu.clock_hz, n_windows=-(-total // window_cycles(window_us,
                                                                                               npu.clock_hz)))
    if noise:
        trace = inject_noise(trace, noise, seed)

    _get_logger().debug("Simulated '%s': %d cycles, %d transactions", model.name, total, len(txns))
    return SimResult(model, trace, txns, spans, total, npu.clock_hz)
