# coding=utf-8
"""The attack and defend commands."""

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
import csv
import logging

# Third-party imports
from pathlib2 import Path

# Local imports
from .._atomic import atomic_open
from ..classify import (ClassifierKind, TRAINERS, baseline_time_only, build_dataset, class_label,
                        classify_segments, evaluate, profile_runs, save_classifier, segment_accuracy,
                        weighted_accuracy)
from ..detection import (BOUNDARY_REPORT_COLUMNS, boundary_report_row, detect_boundaries, layer_groups,
                         score_boundaries, score_easy)
from ..exceptions import DatasetError, InfeasibleTargetError
from ..reporting import NOT_AVAILABLE, Table, write_report
from ..shaping import ShaperConfig, peak_demand_Bps, shape, shaped_trace, window_deviation
from ..sim import SimResult, inject_noise, read_trace_csv, simulate_inference, write_trace_csv
from ._commands import cmd_simulate, reports_dir
from ._context import (build_attacker, ground_truth, load_models, mean_read_Bps, raise_failures, read_spans,
                       run_items, spans_path, trace_path, victim_schedule)

NA = NOT_AVAILABLE
OVERALL = "overall"
END_TO_END_COLUMNS = ("model", "learner", "detected_segments", "true_segments", "segment_accuracy")
SWEEP_COLUMNS = ("model", "target", "target_MBps", "status", "overhead", "stall_cycles", "shaped_windows",
                 "max_deviation_quanta", "wasted_fraction")
SHAPED_ATTACK_COLUMNS = ("model", "unshaped_windows", "shaped_windows", "unshaped_precision", "unshaped_recall",
                         "shaped_candidates", "shaped_precision", "shaped_recall")


def _get_logger():
    return logging.getLogger("npuleak.harness")


def _attack_dir(cfg):
    return Path(str(cfg.out_dir)).joinpath("attack")


def _load_traces(cfg, models):
    missing = [name for name in models if not trace_path(cfg.out_dir, name).exists()]
    if missing:
        _get_logger().info("No traces for %s yet, simulating them first", ", ".join(missing))
        cmd_simulate(cfg)
    return collections.OrderedDict((name, (read_trace_csv(trace_path(cfg.out_dir, name)),
                                           read_spans(spans_path(cfg.out_dir, name)))) for name in models)


def _fmt(value):
    return NA if value is None else "{0:.3f}".format(value)


def _write_boundaries(boundaries, path):
    with atomic_open(path, newline="") as csvfile:
        writer = csv.writer(csvfile, dialect="excel", lineterminator="\n")
        writer.writerow(("position", "confidence"))
        for position, confidence in zip(boundaries.positions, boundaries.confidence):
            writer.writerow((position, repr(float(confidence))))


#region Boundary detection


def _overall_row(scores):
    """Pooled precision and recall over every model's matches (each model weighted by its counts)."""
    easy_matched = sum(len(easy.matches) for easy, _ in scores)
    easy_counted = sum(easy.predicted for easy, _ in scores)
    matched = sum(len(all_.matches) for _, all_ in scores)
    predicted = sum(all_.predicted for _, all_ in scores)
    true = sum(all_.true for _, all_ in scores)

    def _ratio(num, den):
        return num / float(den) if den else NA

    return (OVERALL, _ratio(easy_matched, easy_counted), _ratio(easy_matched, true), _ratio(matched, predicted),
            _ratio(matched, true))


def _detect_all(cfg, attacker, traces):
    rows = []
    scores = []
    detected = collections.OrderedDict()
    for name, (trace, truth) in traces.items():
        boundaries = detect_boundaries(trace, attacker.codebook, attacker.profile, attacker.params)
        _write_boundaries(boundaries, _attack_dir(cfg).joinpath(name + ".boundaries.csv"))
        all_score = score_boundaries(boundaries, truth.boundaries, cfg.match_tolerance)
        easy_score = score_easy(boundaries, truth.boundaries, truth.easy, cfg.match_tolerance)
        rows.append(boundary_report_row(name, easy_score, all_score))
        scores.append((easy_score, all_score))
        detected[name] = boundaries
        _get_logger().info("'%s': %d boundaries detected, precision %s, recall %.3f", name,
                           len(boundaries.positions), _fmt(all_score.precision), all_score.recall)
    rows.append(_overall_row(scores))
    _get_logger().info("Overall boundary recall %s over %d model(s)", rows[-1][4], len(traces))
    return Table("attack_boundaries", BOUNDARY_REPORT_COLUMNS, rows, "Layer boundary detection"), detected


#endregion

#region Layer classification


def _variants(cfg):
    return [(kind, with_dwt) for with_dwt in (True, False) for kind in cfg.learners]


def _variant_name(kind, with_dwt):
    return kind + ("+dwt" if with_dwt else "")


def _classify_model(packed):
    """Per-variant test accuracy on one model's benchmark, and the classifiers that produced them."""
    model, cfg, npu = packed
    schedule = victim_schedule(cfg, model, npu)
    runs = profile_runs(model, schedule, npu, cfg.repeats, cfg.class_noise, cfg.seed, cfg.window_us)
    classifier_dir = _attack_dir(cfg).joinpath("classifiers", model.name)

    accuracies = collections.OrderedDict()
    classifiers = {}
    try:
        datasets = dict((with_dwt, build_dataset(runs, with_dwt).split(cfg.test_size, cfg.seed))
                        for with_dwt in (True, False))
    except DatasetError as e:
        _get_logger().warning("'%s' has no classification benchmark: %s", model.name, e)
        return accuracies, classifiers

    for kind, with_dwt in _variants(cfg):
        train, test = datasets[with_dwt]
        clf = TRAINERS[ClassifierKind.parse(kind)](train, seed=cfg.seed)
        name = _variant_name(kind, with_dwt)
        accuracies[name] = evaluate(clf, test).accuracy
        classifiers[name] = clf
        save_classifier(clf, classifier_dir.joinpath(name + ".clf"))

    train, test = datasets[False]
    baseline = baseline_time_only(train)
    accuracies[ClassifierKind.TIME_ONLY.value] = evaluate(baseline, test).accuracy
    _get_logger().info("'%s': classification accuracies %s", model.name,
                       ", ".join("{0}={1:.3f}".format(k, v) for k, v in accuracies.items()))
    return accuracies, classifiers


def _accuracy_table(cfg, models, results):
    names = [_variant_name(kind, with_dwt) for kind, with_dwt in _variants(cfg)] + [ClassifierKind.TIME_ONLY.value]
    weights = dict((model.name, len(model.weight_layers)) for model in models)
    rows = []
    for variant in names:
        row = [variant]
        per_model = {}
        for model in models:
            accuracy = results.get(model.name, ({}, {}))[0].get(variant)
            row.append(NA if accuracy is None else accuracy)
            if accuracy is not None:
                per_model[model.name] = accuracy
        row.append(weighted_accuracy(per_model, weights) if per_model else NA)
        rows.append(row)
    columns = ["learner"] + [model.name for model in models] + [OVERALL]
    return Table("attack_classification", columns, rows, "Layer classification accuracy (true segmentation)")


def _end_to_end(cfg, npu, models, results, traces, detected):
    """Classify the detected segments with each model's most accurate DWT classifier."""
    rows = []
    for model in models:
        accuracies, classifiers = results.get(model.name, ({}, {}))
        dwt = sorted(name for name in classifiers if name.endswith("+dwt"))
        if not dwt:
            continue
        best = max(dwt, key=lambda name: accuracies[name])
        schedule = victim_schedule(cfg, model, npu)
        trace, truth = traces[model.name]
        segments = [(span.start, span.end, class_label(group, schedule[group[0].id]))
                    for span, group in zip(truth.weight_spans, layer_groups(model))]
        predictions = classify_segments(classifiers[best], trace, detected[model.name].positions)
        rows.append((model.name, best, len(predictions), len(segments), segment_accuracy(predictions, segments)))
    return Table("attack_end_to_end", END_TO_END_COLUMNS, rows, "Layer classification on detected segments")


#endregion


def cmd_attack(cfg):
    """Detect layer boundaries in every victim trace and classify layers from their trace segments."""
    npu = cfg.npu_config()
    models = list(load_models(cfg.models).values())
    traces = _load_traces(cfg, [model.name for model in models])
    attacker = build_attacker(cfg, npu, cfg.out_dir)

    boundary_table, detected = _detect_all(cfg, attacker, traces)
    write_report(boundary_table, reports_dir(cfg.out_dir))

    results, failed = run_items(_classify_model, [(m, cfg, npu) for m in models], "Classification", cfg.workers)
    succeeded = [m for m in models if m.name not in set(o.item[0].name for o in failed)]
    results = dict((m.name, r) for m, r in zip(succeeded, results))
    write_report(_accuracy_table(cfg, models, results), reports_dir(cfg.out_dir))
    write_report(_end_to_end(cfg, npu, models, results, traces, detected), reports_dir(cfg.out_dir))
    raise_failures(failed, "Classification")
    return boundary_table


#region Defence


def _resolve_targets(cfg, peak, mean):
    targets = []
    for target in cfg.shaper_targets:
        if target == "mean":
            targets.append(("mean", mean))
        else:
            targets.append(("{0:g}xpeak".format(target), target * peak))
    targets = sorted(set(targets), key=lambda t: (-t[1], t[0]))
    return [t for t in targets if t[1] > 0]


def _shaper_config(cfg, target_Bps):
    return ShaperConfig(target_Bps, quantum_bytes=cfg.quantum_bytes, window_us=cfg.window_us,
                        max_cycle_factor=cfg.max_cycle_factor, staging_bytes=cfg.staging_bytes)


def _sweep_row(cfg, model, schedule, npu, label, target_Bps):
    try:
        result = shape(model, schedule, npu, _shaper_config(cfg, target_Bps))
    except InfeasibleTargetError as e:
        _get_logger().warning("'%s' at %s: %s", model.name, label, e)
        return (model.name, label, target_Bps / 1e6, "infeasible", NA, NA, NA, NA, NA)
    trace = shaped_trace(result)
    return (model.name, label, target_Bps / 1e6, "ok", result.overhead, result.stall_cycles, len(trace),
            window_deviation(trace, result.cfg.quantum_bytes), result.wasted_fraction)


def _detect_precision(cfg, attacker, trace, truth):
    """Candidates kept, precision and recall; both NA when no candidate survives validation."""
    boundaries = detect_boundaries(trace, attacker.codebook, attacker.profile, attacker.params)
    if not boundaries.positions:
        return 0, NA, NA
    score = score_boundaries(boundaries, truth, cfg.match_tolerance)
    return len(boundaries.positions), score.precision, score.recall


def _defend_model(packed):
    model, cfg, npu, attacker = packed
    schedule = victim_schedule(cfg, model, npu)
    unshaped = simulate_inference(model, schedule, npu, seed=cfg.seed, noise=cfg.noise, window_us=cfg.window_us)
    quantum = _shaper_config(cfg, 1.0).resolved(npu).quantum_bytes
    peak = peak_demand_Bps(unshaped.txns, npu, cfg.window_us, quantum)
    mean = mean_read_Bps(simulate_inference(model, schedule, npu, window_us=cfg.window_us).trace)

    sweep = [_sweep_row(cfg, model, schedule, npu, label, target) for label, target in _resolve_targets(cfg, peak,
                                                                                                       mean)]

    _, unshaped_precision, unshaped_recall = _detect_precision(cfg, attacker, unshaped.trace,
                                                               unshaped.boundary_windows)
    try:
        result = shape(model, schedule, npu, _shaper_config(cfg, cfg.attack_target_fraction * peak))
    except InfeasibleTargetError as e:
        _get_logger().warning("'%s': shaped attack skipped: %s", model.name, e)
        return sweep, (model.name, len(unshaped.trace), NA, unshaped_precision, unshaped_recall, NA, NA, NA)

    trace = shaped_trace(result)
    write_trace_csv(trace, Path(str(cfg.out_dir)).joinpath("defend", model.name + ".shaped.csv"))
    truth = SimResult(model, trace, result.txns, result.cycle_spans, result.shaped_total_cycles, result.clock_hz)
    observed = inject_noise(trace, cfg.noise, cfg.seed) if cfg.noise else trace
    candidates, precision, recall = _detect_precision(cfg, attacker, observed, truth.boundary_windows)
    return sweep, (model.name, len(unshaped.trace), len(trace), unshaped_precision, unshaped_recall, candidates,
                   precision, recall)


def cmd_defend(cfg):
    """Sweep shaping targets per model, then rerun the boundary attack on traces shaped at the attack target."""
    npu = cfg.npu_config()
    models = list(load_models(cfg.models).values())
    attacker = build_attacker(cfg, npu, cfg.out_dir)

    results, failed = run_items(_defend_model, [(m, cfg, npu, attacker) for m in models], "Shaping", cfg.workers)
    sweep = [row for rows, _ in results for row in rows]
    write_report(Table("defend_sweep", SWEEP_COLUMNS, sweep, "Constant-rate shaping sweep"),
                 reports_dir(cfg.out_dir))
    write_report(Table("defend_attack", SHAPED_ATTACK_COLUMNS, [row for _, row in results],
                       "Boundary detection on shaped traces"), reports_dir(cfg.out_dir))
    raise_failures(failed, "Shaping")
    return sweep


#endregion
