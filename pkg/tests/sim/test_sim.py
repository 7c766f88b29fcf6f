# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins import *
from future.builtins.disabled import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

import numpy as np
import pytest

from npuleak.catalog import TileConfig, load_model
from npuleak.exceptions import ScheduleError
from npuleak.sim import (Authenticity, BandwidthTrace, DmaChannel, DmaTransaction, NpuConfig, TransactionLog, TxnKind,
                         count_read_bursts, inject_noise, layer_cycles_batch, pipeline_cycles, read_trace_csv,
                         sample_counter, schedule_cycles, simulate_inference, tile_cost, write_trace_csv)
from npuleak.tuning import load_schedule

from ..helpers import load_bound_npu, tiny_model, tiny_schedule


@pytest.fixture(scope="module")
def tiny_result():
    return simulate_inference(tiny_model(), tiny_schedule(), load_bound_npu())


def test_npu_defaults():
    npu = NpuConfig()
    assert npu.bytes_per_cycle == 4.0
    assert npu.cycles_per_burst == 16
    assert npu.dma_cycles(1) == 16
    assert npu.dma_cycles(65) == 32
    assert npu.window_cycles(4.0) == 400


def test_npu_from_dict():
    npu = NpuConfig.from_dict({"preset": "spatial", "pe_count": 32})
    assert npu.pe_count == 32
    assert npu.dram_bandwidth_Bps == 100e6
    with pytest.raises(ValueError):
        NpuConfig.from_dict({"pe": 32})
    with pytest.raises(ValueError):
        NpuConfig(pe_count=0)


def test_tile_cost_alexnet_layer():
    model = load_model("alexnet")
    cost = tile_cost(model.layer(2), TileConfig(64, 32, 14, 14), NpuConfig())
    assert (cost.num_tiles, cost.bytes_per_tile) == (6, 51200)
    assert cost.load_cycles == 800 * 16
    assert cost.compute_cycles == 4 * (39200 + 32)
    assert cost.layer_cycles == 12800 + 6 * 156928
    assert not cost.load_bound


#yapf: disable
@pytest.mark.parametrize(("n", "load", "compute", "expected"), [
    (1, 10, 3, 13),
    (4, 10, 3, 43),
    (4, 3, 10, 43),
    (2, 5, 5, 15),
])
#yapf: enable
def test_pipeline_cycles(n, load, compute, expected):
    assert pipeline_cycles(n, load, compute) == expected


def test_batch_matches_single_cost():
    layer = tiny_model().layer(2)
    npu = NpuConfig()
    grid = np.array([[8, 8, 8, 8], [32, 16, 16, 16], [1, 1, 1, 1]])
    batch = layer_cycles_batch(layer, grid, npu)
    for row, cycles in zip(grid, batch["cycles"]):
        assert tile_cost(layer, TileConfig(*row), npu).layer_cycles == cycles


def test_schedule_cycles_missing_layer():
    with pytest.raises(ScheduleError):
        schedule_cycles(tiny_model(), {0: TileConfig(1, 1, 1, 1)}, NpuConfig())


def test_simulation_matches_cost_model(tiny_result):
    assert tiny_result.total_cycles == schedule_cycles(tiny_model(), tiny_schedule(), load_bound_npu())


def test_simulation_reads_every_tile(tiny_result):
    model = tiny_model()
    reads = tiny_result.txns.reads()
    assert int(reads.bytes.sum()) == model.weight_bytes
    assert int(tiny_result.trace.read_bytes.sum()) == model.weight_bytes
    assert len(reads.for_layer(2)) == 8
    assert int(tiny_result.trace.write_bytes.sum()) == sum(layer.output_bytes for layer in model.layers)


def test_simulation_spans(tiny_result):
    spans = tiny_result.layer_spans
    assert [span.layer_id for span in spans] == [0, 1, 2, 3, 4]
    for left, right in zip(spans, spans[1:]):
        assert left.end == right.start
    assert spans[-1].end <= len(tiny_result.trace)
    assert len(tiny_result.boundary_windows) == 2
    assert [span.layer_id for span in tiny_result.weight_layer_spans] == [0, 2, 4]


def test_simulation_is_deterministic(tiny_result):
    again = simulate_inference(tiny_model(), tiny_schedule(), load_bound_npu())
    assert again.trace == tiny_result.trace
    assert again.txns == tiny_result.txns


def test_dma_channel_serialises_transfers():
    channel = DmaChannel(NpuConfig())
    assert channel.transfer(0, 64, 0) == 16
    assert channel.transfer(4, 128, 0) == 48
    assert channel.transfer(100, 100, 1) == 132
    log = channel.finish()
    assert list(log.t_start) == [0, 16, 100]
    assert list(log.bytes) == [64, 128, 100]
    assert list(log.layer_id) == [0, 0, 1]
    assert not log.is_fake.any()
    assert len(DmaChannel(NpuConfig(), TxnKind.WRITE).finish()) == 0

def test_simulation_rejects_illegal_schedule():
    schedule = dict(tiny_schedule())
    del schedule[4]
    with pytest.raises(ScheduleError):
        simulate_inference(tiny_model(), schedule, NpuConfig())


def test_reference_schedule_runs_alexnet():
    model = load_model("alexnet")
    result = simulate_inference(model, load_schedule(model))
    assert len(result.boundary_windows) == 4
    assert int(result.trace.read_bytes.sum()) == model.weight_bytes


def test_sample_counter_pro_rata():
    txns = TransactionLog.from_transactions([DmaTransaction(0, 800, 1000)])
    trace = sample_counter(txns, 4.0, 100e6)
    assert list(trace.read_bytes) == [500, 500]
    assert list(trace.write_bytes) == [0, 0]


def test_sample_counter_conserves_bytes():
    rng = np.random.RandomState(3)
    starts = np.sort(rng.randint(0, 10000, size=50))
    txns = TransactionLog(starts, rng.randint(1, 900, size=50), rng.randint(1, 5000, size=50),
                          rng.randint(0, 2, size=50), np.zeros(50, dtype=bool))
    trace = sample_counter(txns, 4.0, 100e6)
    assert trace.read_bytes.sum() == txns.reads().bytes.sum()
    assert trace.write_bytes.sum() == txns.writes().bytes.sum()


def test_counter_does_not_see_authenticity():
    real = DmaTransaction(0, 400, 640)
    fake = DmaTransaction(0, 400, 640, authenticity=Authenticity.FAKE)
    assert fake.payload == 0
    assert (sample_counter(TransactionLog.from_transactions([real])) == sample_counter(
        TransactionLog.from_transactions([fake])))


def test_transaction_log_is_sorted():
    log = TransactionLog.from_transactions([DmaTransaction(50, 10, 64), DmaTransaction(10, 10, 128, TxnKind.WRITE)])
    assert list(log.t_start) == [10, 50]
    assert len(log.writes()) == 1
    assert log[0].kind == TxnKind.WRITE
    assert log.end_cycle == 60


def test_inject_noise_bounds():
    trace = BandwidthTrace(4.0, np.arange(0, 2000, 10))
    noisy = inject_noise(trace, 0.1, seed=7)
    assert noisy == inject_noise(trace, 0.1, seed=7)
    assert noisy != inject_noise(trace, 0.1, seed=8)
    assert np.all(np.abs(noisy.read_bytes - trace.read_bytes) <= 0.1 * trace.read_bytes)
    assert inject_noise(trace, 0.0, seed=7) == trace
    with pytest.raises(ValueError):
        inject_noise(trace, 1.0, seed=7)


def test_count_read_bursts():
    trace = BandwidthTrace(4.0, [0, 5, 5, 0, 3, 0, 0, 2])
    assert count_read_bursts(trace) == 3
    assert count_read_bursts(trace, 3, 8) == 2
    assert count_read_bursts(trace, threshold=4) == 1


def test_trace_csv(tmp_path, tiny_result):
    path = write_trace_csv(tiny_result.trace, tmp_path.joinpath("tiny.csv"))
    assert read_trace_csv(path) == tiny_result.trace
    assert path.read_text().splitlines()[0] == "window_index,time_us,read_bytes,write_bytes"
