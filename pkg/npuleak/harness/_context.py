# coding=utf-8
"""Shared plumbing of the harness commands: models, victim schedules, ground truth files and the attacker."""

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
import io
import json
import logging

# Third-party imports
import numpy as np

from pathlib2 import Path

# Local imports
from .._atomic import atomic_open
from .._json import ToJsonEncoder
from .._multiprocessing import map_ordered
from ..catalog import MODEL_NAMES, BoundaryClass, label_boundaries, load_model
from ..detection import ProfileDb, build_profile_db
from ..exceptions import ExperimentError, ProfileError, ScheduleError
from ..features import build_codebook, extract_features, sliding_windows
from ..sim import LayerSpan, simulate_inference
from ..tuning import load_schedule, tune

SPAN_COLUMNS = ("layer_id", "kind", "start_window", "end_window", "loads_weights", "boundary_class")


def _get_logger():
    return logging.getLogger("npuleak.harness")


def load_models(names):
    return collections.OrderedDict((name, load_model(name)) for name in names)


def victim_schedule(cfg, model, npu):
    """The schedule the victim runs: the shipped reference schedule or the tuner's choice."""
    if cfg.victim_schedule == "tuned":
        return tune(model, npu)
    schedule = load_schedule(model)
    schedule.validate(model, npu)
    return schedule


def run_items(func, items, what, workers=1):
    """
    Apply func to every item in order. Failures are logged and collected; if any item failed, ExperimentError
    lists all of them after the others have run.
    """
    outcomes = map_ordered(func, items, workers)
    failed = [o for o in outcomes if o.failed]
    for o in failed:
        _get_logger().error("%s failed for %s: %s\n%s", what, _item_name(o.item), o.exception, o.traceback)
    return [o.value for o in outcomes if not o.failed], failed


def raise_failures(failed, what):
    if failed:
        names = ", ".join(_item_name(o.item) for o in failed)
        raise ExperimentError("{0} failed for: {1}".format(what, names), [o.exception for o in failed])


def _item_name(item):
    if isinstance(item, tuple):
        item = item[0]
    return getattr(item, "name", "{0}".format(item))


#region Ground truth


class GroundTruth(collections.namedtuple("GroundTruth", ["boundaries", "easy", "weight_spans"])):
    """
    True boundary windows of a trace, whether each boundary is easy (different tile size), and the window span of
    every weight-loading layer up to the next one.
    """
    __slots__ = ()


def ground_truth(result, schedule):
    labels = label_boundaries(result.model, schedule)
    return GroundTruth(list(result.boundary_windows), [label.is_easy for label in labels],
                       list(result.weight_layer_spans))


def trace_path(out_dir, name):
    return Path(str(out_dir)).joinpath("traces", name + ".csv")


def spans_path(out_dir, name):
    return Path(str(out_dir)).joinpath("traces", name + ".spans.csv")


def write_spans(result, schedule, path):
    """Per layer: its window span and, for weight-loading layers after the first, the class of the boundary."""
    classes = dict((label.between[1], label.boundary_class.value) for label in label_boundaries(result.model,
                                                                                                 schedule))
    with atomic_open(path, newline="") as csvfile:
        writer = csv.writer(csvfile, dialect="excel", lineterminator="\n")
        writer.writerow(SPAN_COLUMNS)
        for span in result.layer_spans:
            layer = result.model.layer(span.layer_id)
            writer.writerow([
                span.layer_id, layer.kind.value, span.start, span.end,
                int(layer.loads_weights), classes.get(span.layer_id, "")
            ])
    return Path(str(path))


def read_spans(path):
    """Ground truth from a spans file written by write_spans."""
    path = Path(str(path))
    if not path.exists():
        raise ExperimentError("Ground-truth span file does not exist: {0}".format(path), [])
    boundaries = []
    easy = []
    weight_rows = []
    last_end = 0
    with io.open(str(path), "r", newline="", encoding="utf-8") as csvfile:
        for row in csv.DictReader(csvfile, dialect="excel"):
            last_end = int(row["end_window"])
            if int(row["loads_weights"]):
                weight_rows.append((int(row["layer_id"]), int(row["start_window"])))
            if row["boundary_class"]:
                boundaries.append(int(row["start_window"]))
                easy.append(BoundaryClass.parse(row["boundary_class"]).is_easy)
    ends = [start for _, start in weight_rows[1:]] + [last_end]
    spans = [LayerSpan(layer_id, start, end) for (layer_id, start), end in zip(weight_rows, ends)]
    return GroundTruth(boundaries, easy, spans)


#endregion

#region Attacker


class Attacker(collections.namedtuple("Attacker", ["codebook", "profile", "params"])):
    """What the attacker brings to a victim trace: a codeword vocabulary, a layer profile and detector settings."""
    __slots__ = ()


def _attacker_schedules(models, npu):
    tuned = {}
    reference = {}
    for model in models:
        tuned[model.name] = tune(model, npu)
        try:
            schedule = load_schedule(model)
            schedule.validate(model, npu)
            reference[model.name] = schedule
        except ScheduleError as e:
            _get_logger().warning("Reference schedule of '%s' is not legal on this NPU, profiling without it: %s",
                                  model.name, e)
    return tuned, reference


def _training_windows(task):
    model, schedule, npu, window_us, params = task
    trace = simulate_inference(model, schedule, npu, window_us=window_us).trace
    return [extract_features(segment, params.levels) for segment in sliding_windows(trace, params.win_len,
                                                                                     params.stride)]


def build_attacker(cfg, npu, out_dir):
    """
    Profile every shipped model on the attacker's own copy of the NPU: isolated layer groups for the profile and
    full noise-free runs for the codeword vocabulary. Both are saved under <out>/attack.
    """
    params = cfg.detector_params()
    models = list(load_models(MODEL_NAMES).values())
    tuned, reference = _attacker_schedules(models, npu)
    attack_dir = Path(str(out_dir)).joinpath("attack")

    if cfg.profile_db:
        profile = ProfileDb.load(cfg.profile_db)
        _get_logger().info("Loaded profile of %d entries from %s", len(profile), cfg.profile_db)
    else:
        profile = build_profile_db(models, npu, tuned, reference, cfg.profile_configs_per_layer, cfg.window_us,
                                   cfg.workers)
        profile.save(attack_dir.joinpath("profile.json"))
    if profile.window_us != cfg.window_us:
        raise ProfileError("Profile was sampled with {0} us windows, the traces use {1} us".format(
            profile.window_us, cfg.window_us))

    tasks = []
    for model in models:
        for schedules in (tuned, reference):
            if model.name in schedules:
                tasks.append((model, schedules[model.name], npu, cfg.window_us, params))
    features = []
    for windows in map_ordered(_training_windows, tasks, cfg.workers):
        if windows.failed:
            raise ExperimentError("Profiling run of '{0}' failed".format(windows.item[0].name), [windows.exception])
        features.extend(windows.value)
    codebook = build_codebook(features, cfg.k, cfg.seed)
    with atomic_open(attack_dir.joinpath("codebook.json")) as fout:
        json.dump(codebook, fout, cls=ToJsonEncoder, sort_keys=True)
    _get_logger().info("Attacker ready: %d profile entries, %d codewords from %d windows", len(profile), codebook.k,
                       len(features))
    return Attacker(codebook, profile, params)


#endregion


def mean_read_Bps(trace):
    """Average read bandwidth over the whole trace."""
    duration = len(trace.read_bytes) * trace.window_us * 1e-6
    return float(np.sum(trace.read_bytes)) / duration if duration else 0.0
