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

from npuleak.catalog import MODEL_NAMES, load_model
from npuleak.exceptions import InfeasibleTargetError
from npuleak.shaping import (ShaperConfig, overhead, peak_demand_Bps, shape, shaped_trace, window_deviation)
from npuleak.sim import NpuConfig, simulate_inference
from npuleak.tuning import load_schedule

from ..helpers import load_bound_npu, tiny_model, tiny_schedule


@pytest.fixture(scope="module")
def tiny_peak():
    npu = load_bound_npu()
    unshaped = simulate_inference(tiny_model(), tiny_schedule(), npu)
    return peak_demand_Bps(unshaped.txns, npu)


def test_overhead():
    assert overhead(100, 150) == 0.5
    assert overhead(100, 100) == 0.0


def test_shaper_config_defaults():
    cfg = ShaperConfig(1e6)
    assert cfg.write_period_us == 4 * cfg.window_us
    resolved = cfg.resolved(NpuConfig())
    assert resolved.quantum_bytes == 64
    assert resolved.staging_bytes == NpuConfig().weight_scratchpad_bytes
    assert resolved.slot_cycles(100e6) == 6400
    assert ShaperConfig(32e6).resolved(NpuConfig()).slot_cycles(100e6) == 200
    assert ShaperConfig(30e6).resolved(NpuConfig()).slot_cycles(100e6) == 214


def test_shaper_config_rejects_bad_values():
    with pytest.raises(ValueError):
        ShaperConfig(0)
    with pytest.raises(ValueError):
        ShaperConfig(1e6, quantum_bytes=100).resolved(NpuConfig())
    with pytest.raises(ValueError):
        ShaperConfig(1e6, staging_bytes=-1)


def test_shaping_at_peak_is_free(tiny_peak):
    result = shape(tiny_model(), tiny_schedule(), load_bound_npu(), ShaperConfig(tiny_peak))
    assert result.overhead == 0.0
    assert result.stall_cycles == 0


def test_shaped_trace_is_constant(tiny_peak):
    result = shape(tiny_model(), tiny_schedule(), load_bound_npu(), ShaperConfig(0.5 * tiny_peak))
    trace = shaped_trace(result)
    assert window_deviation(trace, result.cfg.quantum_bytes) <= 1.0
    assert result.overhead > 0.0


def test_shaping_preserves_demand(tiny_peak):
    model = tiny_model()
    result = shape(model, tiny_schedule(), load_bound_npu(), ShaperConfig(0.5 * tiny_peak))
    assert result.demand_bytes == model.weight_bytes
    assert int(result.txns.writes().payload.sum()) == sum(layer.output_bytes for layer in model.layers)
    assert result.fake_bytes > 0
    assert 0.0 < result.wasted_fraction < 1.0


def test_overhead_is_monotone(tiny_peak):
    overheads = [
        shape(tiny_model(), tiny_schedule(), load_bound_npu(), ShaperConfig(f * tiny_peak)).overhead
        for f in (1.0, 0.75, 0.5, 0.35, 0.25)
    ]
    assert overheads[0] == 0.0
    assert all(a <= b for a, b in zip(overheads, overheads[1:]))


def test_target_below_one_quantum_is_infeasible():
    with pytest.raises(InfeasibleTargetError) as info:
        shape(tiny_model(), tiny_schedule(), load_bound_npu(), ShaperConfig(1e3))
    assert info.value.target_Bps == 1e3


def test_cycle_cap_is_infeasible(tiny_peak):
    with pytest.raises(InfeasibleTargetError):
        shape(tiny_model(), tiny_schedule(), load_bound_npu(), ShaperConfig(0.2 * tiny_peak, max_cycle_factor=1.5))


def test_shaping_hides_alexnet_tile_bursts():
    model = load_model("alexnet")
    schedule = load_schedule(model)
    npu = NpuConfig()
    unshaped = simulate_inference(model, schedule, npu)
    peak = peak_demand_Bps(unshaped.txns, npu)
    result = shape(model, schedule, npu, ShaperConfig(0.5 * peak))
    trace = shaped_trace(result)
    assert window_deviation(trace, result.cfg.quantum_bytes) <= 1.0
    assert np.std(trace.read_bytes[:-1]) < np.std(unshaped.trace.read_bytes)
    assert np.std(unshaped.trace.read_bytes) > 0


def test_shaped_trace_other_window(tiny_peak):
    result = shape(tiny_model(), tiny_schedule(), load_bound_npu(), ShaperConfig(0.5 * tiny_peak))
    coarse = shaped_trace(result, window_us=8.0)
    assert coarse.window_us == 8.0
    assert coarse.read_bytes.sum() == shaped_trace(result).read_bytes.sum()


def test_read_slots_are_evenly_spaced(tiny_peak):
    npu = load_bound_npu()
    result = shape(tiny_model(), tiny_schedule(), npu, ShaperConfig(0.6 * tiny_peak))
    reads = result.txns.reads()
    slot = result.cfg.slot_cycles(npu.clock_hz)
    assert reads.t_start[0] == 0
    assert np.all(np.diff(reads.t_start) == slot)
    assert np.all(reads.duration <= slot)
    assert np.all(reads.bytes == result.cfg.quantum_bytes)
    assert reads.is_fake.any()


def test_target_above_dram_bandwidth_is_infeasible():
    with pytest.raises(InfeasibleTargetError):
        shape(tiny_model(), tiny_schedule(), load_bound_npu(), ShaperConfig(1e9))


def test_shaped_reads_do_not_depend_on_the_model():
    npu = NpuConfig()
    cfg = ShaperConfig(200e6)
    tiny = shaped_trace(shape(tiny_model(), tiny_schedule(), npu, cfg)).read_bytes
    model = load_model("alexnet")
    alexnet = shaped_trace(shape(model, load_schedule(model), npu, cfg)).read_bytes
    n = min(len(tiny), len(alexnet)) - 1
    assert n > 0
    assert np.array_equal(tiny[:n], alexnet[:n])


def test_staging_lets_reads_run_ahead(tiny_peak):
    npu = load_bound_npu()
    staged = shape(tiny_model(), tiny_schedule(), npu, ShaperConfig(0.5 * tiny_peak))
    unstaged = shape(tiny_model(), tiny_schedule(), npu, ShaperConfig(0.5 * tiny_peak, staging_bytes=0))
    assert unstaged.cfg.staging_bytes == 0
    assert unstaged.overhead >= staged.overhead
    assert unstaged.demand_bytes == staged.demand_bytes


@pytest.mark.parametrize(("name"), MODEL_NAMES)
def test_overhead_sweep_on_catalog_models(name):
    model = load_model(name)
    schedule = load_schedule(model)
    npu = NpuConfig()
    unshaped = simulate_inference(model, schedule, npu)
    peak = peak_demand_Bps(unshaped.txns, npu)
    reads = unshaped.trace.read_bytes
    mean = reads.sum() / (len(reads) * unshaped.trace.window_us * 1e-6)

    targets = sorted([f * peak for f in (1.0, 0.75, 0.5, 0.25)] + [mean], reverse=True)
    overheads = dict((target, shape(model, schedule, npu, ShaperConfig(target)).overhead) for target in targets)
    assert overheads[peak] == 0.0
    assert all(overheads[a] <= overheads[b] for a, b in zip(targets, targets[1:]))
    assert 0.0 < overheads[mean] < 0.5
