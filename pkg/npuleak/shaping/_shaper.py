# coding=utf-8
"""
This module contains the constant-bandwidth traffic shaper.

Reads go out as fixed-size quanta at a fixed interval, quantum / target. Tile loads are split into quanta (the
last one padded) and fetched in request order; a slot with nothing to fetch carries a fake quantum. When demand
outruns the slots a load completes late, which stalls the compute that needs it. Writes go out on their own
channel in fixed-size slots at a fixed period, real or fake.
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
import logging

# Third-party imports
import numpy as np

# Local imports
from ..exceptions import InfeasibleTargetError
from ..sim import (DEFAULT_WINDOW_US, BandwidthTrace, DmaChannel, NpuConfig, TransactionLog, TxnKind, run_tiled,
                   sample_counter, window_cycles)


def _get_logger():
    return logging.getLogger("npuleak.shaping")


class ShapedReadChannel(object):
    """
    Read channel that issues one quantum every slot of slot_cycles, starting at cycle 0.

    Tile loads are fetched in request order, a whole tile in consecutive slots, into a staging buffer that may
    run ahead of the NPU by up to staging_bytes (always at least one tile). A load completes no earlier than it
    would on an unshaped channel and not before its last quantum has arrived; slots without a quantum to fetch
    carry a fake one.
    """

    def __init__(self, npu, cfg, max_cycles):
        self._npu = npu
        self._cfg = cfg
        self._slot = cfg.slot_cycles(npu.clock_hz)
        self._quantum_cycles = npu.dma_cycles(cfg.quantum_bytes)
        self._max_cycles = max_cycles
        self._busy_until = 0
        self._next_slot = 0
        self._tiles = []

        window = window_cycles(cfg.window_us, npu.clock_hz)
        if self._slot > window:
            raise InfeasibleTargetError(
                "Target {0:g} B/s carries less than one {1}-byte quantum per window".format(
                    cfg.target_Bps, cfg.quantum_bytes), cfg.target_Bps)
        if self._slot < self._quantum_cycles:
            raise InfeasibleTargetError(
                "Target {0:g} B/s exceeds the DRAM bandwidth of {1:g} B/s".format(cfg.target_Bps,
                                                                                npu.dram_bandwidth_Bps),
                cfg.target_Bps)

    @property
    def slot_cycles(self):
        return self._slot

    def _staging_free_at(self, nbytes):
        """Cycle from which the staging buffer has room for a tile of nbytes besides the tiles still held."""
        held = nbytes
        index = len(self._tiles)
        while index >= 1 and held + self._tiles[index - 1][0] <= self._cfg.staging_bytes:
            held += self._tiles[index - 1][0]
            index -= 1
        # the tile just before this one may always be held
        index = min(index, len(self._tiles) - 1)
        return self._tiles[index - 1][1] if index >= 1 else 0

    def transfer(self, earliest, nbytes, layer_id):
        quanta = -(-nbytes // self._cfg.quantum_bytes)
        first = max(self._next_slot, -(-self._staging_free_at(quanta * self._cfg.quantum_bytes) // self._slot))
        fetched = (first + quanta - 1) * self._slot + self._quantum_cycles
        done = max(max(earliest, self._busy_until) + self._npu.dma_cycles(nbytes), fetched)
        if done > self._max_cycles:
            raise InfeasibleTargetError(
                "Target {0:g} B/s stretches the run past {1} cycles".format(self._cfg.target_Bps, self._max_cycles),
                self._cfg.target_Bps)

        self._tiles.append((quanta * self._cfg.quantum_bytes, done, first, quanta, nbytes, layer_id))
        self._next_slot = first + quanta
        self._busy_until = done
        return done

    def finish(self, end_cycle):
        """Every slot that starts before end_cycle, and every slot carrying a real quantum."""
        quantum = self._cfg.quantum_bytes
        n_slots = max(-(-end_cycle // self._slot), self._next_slot)

        payload = np.zeros(n_slots, dtype=np.int64)
        layer = np.full(n_slots, -1, dtype=np.int64)
        for _, _, first, quanta, nbytes, layer_id in self._tiles:
            payload[first:first + quanta] = quantum
            payload[first + quanta - 1] = nbytes - (quanta - 1) * quantum
            layer[first:first + quanta] = layer_id
        fake = layer < 0

        return TransactionLog(t_start=np.arange(n_slots, dtype=np.int64) * self._slot,
                              duration=np.full(n_slots, self._quantum_cycles),
                              bytes=np.full(n_slots, quantum),
                              kind=np.zeros(n_slots),
                              fake=fake,
                              payload=payload,
                              layer_id=layer)


class ShapedWriteChannel(object):
    """Posted writes drained in fixed-size slots every write period; idle slots carry fake writes."""

    def __init__(self, npu, cfg):
        self._npu = npu
        self._period = window_cycles(cfg.write_period_us, npu.clock_hz)
        self._slot_bytes = cfg.write_quantum_bytes
        self._requests = []

    def transfer(self, earliest, nbytes, layer_id):
        self._requests.append((earliest, nbytes))
        return earliest

    def finish(self, end_cycle):
        """Slots cover [0, end_cycle) and continue until every queued byte has been written."""
        total = sum(nbytes for _, nbytes in self._requests)
        n_slots = max(1, -(-end_cycle // self._period))
        while True:
            served = self._served(n_slots)
            if served[-1] >= total:
                break
            n_slots += -(-(total - served[-1]) // self._slot_bytes) + 1

        real = np.diff(np.concatenate([[0], served]))
        count = len(served)
        return TransactionLog(t_start=np.arange(count) * self._period,
                              duration=np.full(count, self._npu.dma_cycles(self._slot_bytes)),
                              bytes=np.full(count, self._slot_bytes),
                              kind=np.ones(count),
                              fake=real == 0,
                              payload=real)

    def _served(self, n_slots):
        """Cumulative real bytes written by the end of each slot."""
        slot = np.arange(n_slots, dtype=np.int64)
        if self._requests:
            times, sizes = (np.array(column, dtype=np.int64) for column in zip(*self._requests))
            arrived = np.concatenate([[0], np.cumsum(sizes)])[np.searchsorted(times, slot * self._period,
                                                                              side="right")]
        else:
            arrived = np.zeros(n_slots, dtype=np.int64)
        # served[s] = min(served[s-1] + slot_bytes, arrived[s]), unrolled
        bound = np.minimum.accumulate(arrived - slot * self._slot_bytes) + slot * self._slot_bytes
        return np.minimum(bound, (slot + 1) * self._slot_bytes)


class ShapedResult(object):
    """A shaped inference: its transactions (real and fake) and the cost of shaping."""

    def __init__(self, model, cfg, txns, cycle_spans, shaped_total_cycles, unshaped_total_cycles, clock_hz):
        self.model = model
        self.cfg = cfg
        self.txns = txns
        self.cycle_spans = tuple(cycle_spans)
        self.shaped_total_cycles = shaped_total_cycles
        self.unshaped_total_cycles = unshaped_total_cycles
        self.clock_hz = clock_hz

    @property
    def stall_cycles(self):
        return self.shaped_total_cycles - self.unshaped_total_cycles

    @property
    def overhead(self):
        return overhead(self.unshaped_total_cycles, self.shaped_total_cycles)

    @property
    def demand_bytes(self):
        reads = self.txns.reads()
        return int(reads.payload[~reads.is_fake].sum())

    @property
    def padding_bytes(self):
        reads = self.txns.reads().real()
        return int((reads.bytes - reads.payload).sum())

    @property
    def fake_bytes(self):
        return int(self.txns.reads().fake().bytes.sum())

    @property
    def wasted_fraction(self):
        """Share of shaped read bandwidth that carried no demand."""
        total = int(self.txns.reads().bytes.sum())
        return (total - self.demand_bytes) / float(total) if total else 0.0

    def summary(self):
        return {
            "model": self.model.name,
            "target_Bps": self.cfg.target_Bps,
            "quantum_bytes": self.cfg.quantum_bytes,
            "unshaped_cycles": self.unshaped_total_cycles,
            "shaped_cycles": self.shaped_total_cycles,
            "stall_cycles": self.stall_cycles,
            "overhead": self.overhead,
            "wasted_fraction": self.wasted_fraction,
        }

    def __repr__(self):
        return "ShapedResult({0!r}, {1:g} B/s, overhead {2:.3f})".format(self.model.name, self.cfg.target_Bps,
                                                                        self.overhead)


def overhead(unshaped_cycles, shaped_cycles):
    """Relative slow-down: shaped / unshaped - 1."""
    if not unshaped_cycles > 0 or not shaped_cycles > 0:
        raise ValueError("Cycle counts must be positive, got {0!r} and {1!r}".format(unshaped_cycles, shaped_cycles))
    return shaped_cycles / float(unshaped_cycles) - 1.0


def shape(model, schedule, npu, cfg):
    """
    Run model under schedule on npu with the read and write channels shaped by cfg.

    The unshaped run is simulated first; it gives the overhead baseline and the cycle cap.
    """
    npu = npu or NpuConfig()
    cfg = cfg.resolved(npu)

    _, unshaped = run_tiled(model, schedule, npu, DmaChannel(npu, TxnKind.READ), DmaChannel(npu, TxnKind.WRITE))
    reads = ShapedReadChannel(npu, cfg, max_cycles=cfg.max_cycle_factor * unshaped)
    writes = ShapedWriteChannel(npu, cfg)
    spans, shaped = run_tiled(model, schedule, npu, reads, writes)

    write_log = writes.finish(shaped)
    txns = TransactionLog.concat([reads.finish(max(shaped, write_log.end_cycle)), write_log])
    result = ShapedResult(model, cfg, txns, spans, shaped, unshaped, npu.clock_hz)
    _get_logger().info("Shaped '%s' at %.0f MB/s: one quantum every %d cycles, overhead %.1f%%", model.name,
                       cfg.target_Bps / 1e6, reads.slot_cycles, 100 * result.overhead)
    return result


def shaped_trace(result, window_us=None):
    """
    The counter trace an attacker sees on the shaped interface; authenticity is not part of it.

    At the shaper's own window length quanta are counted in the window they start in, so window counts differ by at
    most one quantum; any other window length falls back to pro-rata attribution.
    """
    if window_us is None or window_us == result.cfg.window_us:
        width = window_cycles(result.cfg.window_us, result.clock_hz)
        txns = result.txns
        n_windows = int(txns.t_start.max()) // width + 1 if len(txns) else 0
        counts = []
        for part in (txns.reads(), txns.writes()):
            counts.append(np.bincount(part.t_start // width, weights=part.bytes, minlength=n_windows).astype(np.int64))
        return BandwidthTrace(result.cfg.window_us, counts[0], counts[1])
    return sample_counter(result.txns, window_us, result.clock_hz)


def peak_demand_Bps(txns, npu, window_us=None, quantum_bytes=None):
    """
    Highest unshaped read demand over any window, counting each transfer as quanta starting at raw DMA speed.

    When the peak fills a window and the window is a whole number of quanta long, shaping at this rate issues a
    quantum every raw quantum time and never delays a load.
    """
    window_us = window_us or DEFAULT_WINDOW_US
    quantum = quantum_bytes or npu.dma_burst_bytes
    width = window_cycles(window_us, npu.clock_hz)
    quantum_cycles = quantum // npu.dma_burst_bytes * npu.cycles_per_burst

    reads = txns.reads().real()
    if len(reads) == 0:
        return 0.0
    count = -(-reads.bytes // quantum)
    owner = np.repeat(np.arange(len(reads)), count)
    offset = np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count)
    windows = (reads.t_start[owner] + offset * quantum_cycles) // width
    # no shaper can issue more quanta per window than the channel moves
    capacity = max(1, width // quantum_cycles)
    peak = min(int(np.bincount(windows).max()), capacity) * quantum
    return peak / (window_us * 1e-6)


def window_deviation(trace, quantum_bytes):
    """
    Spread of the read bytes over the complete windows of a shaped trace, in quanta (0 when perfectly constant).

    The last window is excluded because the run may end inside it.
    """
    reads = np.asarray(trace.read_bytes)[:-1]
    if len(reads) == 0:
        return 0.0
    return float(reads.max() - reads.min()) / quantum_bytes
