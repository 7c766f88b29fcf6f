# coding=utf-8
"""The simulate, tune and report commands."""

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
from pathlib2 import Path

# Local imports
from .._atomic import atomic_open
from ..exceptions import ScheduleError
from ..reporting import Table, ToWorkbook, read_csv_table, render_text, write_report
from ..sim import schedule_cycles, simulate_inference, write_trace_csv
from ..tuning import explore, load_schedule, tune, write_schedule
from ._context import (ground_truth, load_models, raise_failures, run_items, spans_path, trace_path,
                       victim_schedule, write_spans)

SIMULATE_COLUMNS = ("model", "layers", "weight_layers", "total_cycles", "runtime_us", "windows", "easy_boundaries",
                    "all_boundaries")
TUNE_COLUMNS = ("model", "best_cycles", "reference_cycles", "reference_ratio", "samples", "min_ratio",
                "median_ratio", "max_ratio")
WORKBOOK_NAME = "npuleak.xlsx"
SUMMARY_NAME = "summary.txt"


def _get_logger():
    return logging.getLogger("npuleak.harness")


def reports_dir(out_dir):
    return Path(str(out_dir)).joinpath("reports")


def _simulate_model(packed):
    model, cfg, npu = packed
    schedule = victim_schedule(cfg, model, npu)
    result = simulate_inference(model, schedule, npu, seed=cfg.seed, noise=cfg.noise, window_us=cfg.window_us)
    write_trace_csv(result.trace, trace_path(cfg.out_dir, model.name))
    write_spans(result, schedule, spans_path(cfg.out_dir, model.name))
    write_schedule(schedule, Path(str(cfg.out_dir)).joinpath("schedules", model.name + ".schedule"))

    truth = ground_truth(result, schedule)
    runtime_us = result.total_cycles / npu.clock_hz * 1e6
    _get_logger().info("Simulated '%s': %d cycles, %d windows", model.name, result.total_cycles, len(result.trace))
    return (model.name, len(model.layers), len(model.weight_layers), result.total_cycles, runtime_us,
            len(result.trace), sum(truth.easy), len(truth.boundaries))


def cmd_simulate(cfg):
    """One trace, its ground-truth spans and the victim schedule per model."""
    npu = cfg.npu_config()
    models = load_models(cfg.models)
    rows, failed = run_items(_simulate_model, [(m, cfg, npu) for m in models.values()], "Simulation", cfg.workers)
    write_report(Table("simulate", SIMULATE_COLUMNS, rows, "Simulated victim traces"), reports_dir(cfg.out_dir))
    raise_failures(failed, "Simulation")
    return rows


def _reference_cycles(model, npu):
    try:
        return schedule_cycles(model, load_schedule(model), npu)
    except ScheduleError as e:
        _get_logger().warning("Reference schedule of '%s' does not run on this NPU: %s", model.name, e)
        return None


def _tune_model(packed):
    model, cfg, npu = packed
    tune_dir = Path(str(cfg.out_dir)).joinpath("tune")
    best = tune(model, npu)
    write_schedule(best, tune_dir.joinpath(model.name + ".schedule"))

    result = explore(model, npu, cfg.explore_samples, cfg.seed)
    with atomic_open(tune_dir.joinpath(model.name + ".explore.txt")) as fout:
        fout.write("# sample ratio\n")
        for index, ratio in result.rows():
            fout.write("{0} {1!r}\n".format(index, ratio))

    reference = _reference_cycles(model, npu)
    reference_ratio = reference / float(best.total_cycles) if reference is not None else None
    return (model.name, best.total_cycles, reference, reference_ratio,
            len(result.ratios), result.min, result.median, result.max)


def cmd_tune(cfg):
    """Best schedule per model and the spread of randomly sampled schedules (two-column plot data)."""
    npu = cfg.npu_config()
    models = load_models(cfg.models)
    rows, failed = run_items(_tune_model, [(m, cfg, npu) for m in models.values()], "Tuning", cfg.workers)
    write_report(Table("tune", TUNE_COLUMNS, rows, "Tile configuration exploration"), reports_dir(cfg.out_dir))
    raise_failures(failed, "Tuning")
    return rows


def cmd_report(cfg):
    """Collect every CSV report into one workbook and one aligned-text summary."""
    directory = reports_dir(cfg.out_dir)
    paths = sorted(p for p in directory.glob("*.csv")) if directory.exists() else []
    if not paths:
        _get_logger().warning("No reports found in %s", directory)
        return None
    tables = [read_csv_table(p) for p in paths]
    workbook = ToWorkbook().workbook(tables, directory.joinpath(WORKBOOK_NAME))
    with atomic_open(directory.joinpath(SUMMARY_NAME)) as fout:
        fout.write("\n".join(render_text(t._replace(title=t.name)) for t in tables))
    _get_logger().info("Collected %d reports into %s", len(tables), workbook)
    return workbook
