# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins import *
from future.builtins.disabled import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

import logging

import pytest
import yaml

from npuleak.catalog import load_model
from npuleak.exceptions import CatalogError, ExperimentError
from npuleak.detection import DetectionScore
from npuleak.harness import (DEFAULTS, RESOLVED_CONFIG_NAME, ExperimentConfig, cmd_report, cmd_simulate, cmd_tune,
                             ground_truth, load_config, main, read_spans, spans_path, trace_path, write_resolved)
from npuleak.harness._attack import NA, OVERALL, _overall_row, _resolve_targets
from npuleak.harness._context import raise_failures, run_items
from npuleak.sim import read_trace_csv, simulate_inference
from npuleak.tuning import load_schedule


def _config(tmp_path, **values):
    values.setdefault("models", ["alexnet"])
    values.setdefault("out", str(tmp_path / "out"))
    return ExperimentConfig.from_dict(values)


@pytest.fixture(autouse=True)
def _quiet_logging():
    yield
    logger = logging.getLogger("npuleak")
    for handler in list(logger.handlers):
        if not isinstance(handler, logging.NullHandler):
            logger.removeHandler(handler)
            handler.close()


def test_defaults():
    cfg = load_config()
    assert list(cfg) == list(DEFAULTS.values())
    assert cfg.npu_config().pe_count == 256
    assert cfg.detector_params().win_len == DEFAULTS["win_len"]


def test_unknown_key():
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"window": 4})


def test_unknown_model():
    with pytest.raises(CatalogError) as excinfo:
        ExperimentConfig.from_dict({"models": ["alexnet", "lenet"]})
    assert "lenet" in str(excinfo.value)


@pytest.mark.parametrize("values", [
    {"models": []},
    {"victim_schedule": "random"},
    {"learners": ["svm", "forest"]},
    {"shaper_targets": [0.5, -1]},
    {"attack_target_fraction": 0},
    {"workers": 0},
    {"context": 0},
])
def test_invalid_values(values):
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict(values)


def test_replace_validates(tmp_path):
    cfg = _config(tmp_path)
    assert cfg._replace(seed=3).seed == 3
    with pytest.raises(ValueError):
        cfg._replace(repeats=0)


def test_load_config_file(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(u"models: [vgg11]\nseed: 5\nnoise: 0.1\n")
    cfg = load_config(path, seed=9, out=tmp_path / "elsewhere")
    assert cfg.models == ["vgg11"]
    assert cfg.seed == 9
    assert cfg.noise == 0.1
    assert str(cfg.out_dir) == str(tmp_path / "elsewhere")
    assert load_config(models="alexnet, vgg16").models == ["alexnet", "vgg16"]


def test_load_config_errors(tmp_path):
    with pytest.raises(ValueError):
        load_config(tmp_path / "missing.yaml")
    listing = tmp_path / "list.yaml"
    listing.write_text(u"- a\n- b\n")
    with pytest.raises(ValueError):
        load_config(listing)
    broken = tmp_path / "broken.yaml"
    broken.write_text(u"models: [alexnet\n")
    with pytest.raises(ValueError):
        load_config(broken)


def test_write_resolved(tmp_path):
    cfg = _config(tmp_path, seed=4)
    path = write_resolved(cfg)
    assert path.name == RESOLVED_CONFIG_NAME
    with path.open() as fin:
        assert ExperimentConfig.from_dict(yaml.safe_load(fin)) == cfg


def test_run_items_collects_failures():

    def _invert(value):
        return 1.0 / value

    values, failed = run_items(_invert, [1, 0, 2], "Inversion")
    assert values == [1.0, 0.5]
    assert len(failed) == 1
    with pytest.raises(ExperimentError) as excinfo:
        raise_failures(failed, "Inversion")
    assert "0" in str(excinfo.value)
    raise_failures([], "Inversion")


def test_resolve_targets(tmp_path):
    cfg = _config(tmp_path)
    targets = _resolve_targets(cfg, 100.0, 30.0)
    assert [label for label, _ in targets] == ["1xpeak", "0.75xpeak", "0.5xpeak", "mean", "0.25xpeak"]
    assert [value for _, value in targets] == [100.0, 75.0, 50.0, 30.0, 25.0]
    assert _resolve_targets(cfg, 100.0, 0.0)[-1][0] == "0.25xpeak"


def test_overall_row():
    easy = DetectionScore(1.0, 0.5, [(10, 10)], 1, 1)
    everything = DetectionScore(1.0, 1.0, [(10, 10), (20, 20)], 2, 2)
    nothing = DetectionScore(None, 0.0, [], 0, 0)
    row = _overall_row([(easy, everything), (nothing, DetectionScore(0.0, 0.0, [], 0, 2))])
    assert row == (OVERALL, 1.0, 0.25, 1.0, 0.5)
    assert _overall_row([])[1:] == (NA, NA, NA, NA)


@pytest.fixture(scope="module")
def simulated(tmp_path_factory):
    out = tmp_path_factory.mktemp("simulated")
    cfg = ExperimentConfig.from_dict({"models": ["alexnet"], "out": str(out)})
    rows = cmd_simulate(cfg)
    return cfg, rows


def test_cmd_simulate(simulated):
    cfg, rows = simulated
    assert len(rows) == 1
    name, layers, weight_layers, _, _, windows, easy, boundaries = rows[0]
    assert name == "alexnet"
    assert (easy, boundaries) == (3, 4)
    assert len(read_trace_csv(trace_path(cfg.out_dir, "alexnet"))) == windows
    assert cfg.out_dir.joinpath("schedules", "alexnet.schedule").exists()
    assert cfg.out_dir.joinpath("reports", "simulate.csv").exists()
    assert weight_layers < layers


def test_spans_round_trip(simulated):
    cfg, _ = simulated
    truth = read_spans(spans_path(cfg.out_dir, "alexnet"))
    assert len(truth.boundaries) == 4
    assert sum(truth.easy) == 3
    assert truth.boundaries == [span.start for span in truth.weight_spans[1:]]
    assert all(a.end == b.start for a, b in zip(truth.weight_spans, truth.weight_spans[1:]))
    with pytest.raises(ExperimentError):
        read_spans(spans_path(cfg.out_dir, "vgg11"))


def test_cmd_simulate_is_deterministic(simulated, tmp_path):
    cfg, _ = simulated
    again = cfg._replace(out=str(tmp_path))
    cmd_simulate(again)
    for name in ("traces/alexnet.csv", "traces/alexnet.spans.csv", "schedules/alexnet.schedule"):
        assert cfg.out_dir.joinpath(name).read_bytes() == again.out_dir.joinpath(name).read_bytes()


def test_cmd_tune(tmp_path):
    cfg = _config(tmp_path, explore_samples=5)
    rows = cmd_tune(cfg)
    name, best, reference, ratio, samples, low, _, _ = rows[0]
    assert name == "alexnet"
    assert samples == 5
    assert low >= 1.0
    assert reference == NA or ratio >= 1.0
    lines = cfg.out_dir.joinpath("tune", "alexnet.explore.txt").read_text().splitlines()
    assert lines[0].startswith("#")
    assert len(lines) == 6
    assert best > 0


def test_cmd_report(simulated):
    cfg, _ = simulated
    workbook = cmd_report(cfg)
    assert workbook.exists()
    summary = workbook.parent.joinpath("summary.txt").read_text()
    assert "alexnet" in summary


def test_cmd_report_without_reports(tmp_path):
    assert cmd_report(_config(tmp_path)) is None


def test_main_exit_codes(tmp_path):
    assert main(["simulate", "--models", "lenet", "--out", str(tmp_path / "a")]) == 1
    config = tmp_path / "bad.yaml"
    config.write_text(u"window: 4\n")
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "b")]) == 2


def test_main_simulate(tmp_path):
    out = tmp_path / "run"
    assert main(["simulate", "--models", "alexnet", "--out", str(out), "--seed", "2"]) == 0
    assert out.joinpath(RESOLVED_CONFIG_NAME).exists()
    assert out.joinpath("npuleak.log").exists()
    assert out.joinpath("traces", "alexnet.csv").exists()


def test_ground_truth_matches_spans(simulated):
    cfg, _ = simulated
    model = load_model("alexnet")
    schedule = load_schedule(model)
    truth = ground_truth(simulate_inference(model, schedule, cfg.npu_config()), schedule)
    assert truth.boundaries == read_spans(spans_path(cfg.out_dir, "alexnet")).boundaries
