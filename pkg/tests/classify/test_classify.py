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

from npuleak.exceptions import DatasetError
from npuleak.classify import (ClassifierKind, CnnHyper, FeatureLayout, MlpHyper, SegmentPrediction, SegmentRun,
                              SvmHyper, baseline_time_only, build_dataset, classify_segments, evaluate,
                              load_classifier, loss_history, profile_runs, resample_segment, save_classifier,
                              segment_accuracy, segment_inputs, train_cnn, train_mlp, train_svm, weighted_accuracy)
from npuleak.classify._learners import cnn_loss_grad, mlp_loss_grad
from npuleak.sim import NpuConfig

from ..helpers import tiny_model, tiny_schedule

PER_CLASS = 15
SHAPES = (("a", 40, 100.0), ("b", 40, 500.0), ("c", 80, 100.0))


def _synthetic_runs(seed=0):
    rng = np.random.RandomState(seed)
    runs = []
    for label, length, level in SHAPES:
        for _ in range(PER_CLASS):
            runs.append(SegmentRun(label, label, "cfg", "synthetic", 0, level + rng.normal(0.0, 5.0, size=length)))
    return runs


@pytest.fixture(scope="module")
def synthetic():
    return build_dataset(_synthetic_runs())


@pytest.fixture(scope="module")
def svm(synthetic):
    return train_svm(synthetic, SvmHyper(epochs=100), seed=0)


def _numeric_grad(loss, params, key, eps=1e-6):
    grad = np.zeros_like(params[key])
    for index in np.ndindex(*params[key].shape):
        original = params[key][index]
        params[key][index] = original + eps
        plus = loss(params)
        params[key][index] = original - eps
        minus = loss(params)
        params[key][index] = original
        grad[index] = (plus - minus) / (2 * eps)
    return grad


def test_mlp_gradient():
    rng = np.random.RandomState(1)
    X = rng.normal(size=(5, 3))
    labels = np.array([0, 1, 2, 1, 0])
    params = {"W1": rng.normal(size=(3, 4)), "b1": rng.normal(size=4), "W2": rng.normal(size=(4, 3)),
              "b2": rng.normal(size=3)}
    _, grads = mlp_loss_grad(params, X, labels, 0.01)
    for key in params:
        numeric = _numeric_grad(lambda p: mlp_loss_grad(p, X, labels, 0.01)[0], params, key)
        assert np.allclose(grads[key], numeric, atol=1e-5), key


def test_cnn_gradient():
    rng = np.random.RandomState(2)
    inputs = (rng.normal(size=(4, 2, 10)), rng.normal(size=(4, 3)))
    labels = np.array([0, 1, 1, 0])
    params = {"filters": rng.normal(size=(3, 2, 3)), "filter_bias": rng.normal(size=3),
              "W": rng.normal(size=(6, 2)), "b": rng.normal(size=2)}
    _, grads = cnn_loss_grad(params, inputs, labels, 0.01)
    for key in params:
        numeric = _numeric_grad(lambda p: cnn_loss_grad(p, inputs, labels, 0.01)[0], params, key)
        assert np.allclose(grads[key], numeric, atol=1e-5), key


def test_loss_history_decreases():
    rng = np.random.RandomState(3)
    X = np.vstack([rng.normal(-2, 1, size=(20, 2)), rng.normal(2, 1, size=(20, 2))])
    labels = np.array([0] * 20 + [1] * 20)
    params = {"W1": rng.normal(0, 0.5, size=(2, 8)), "b1": np.zeros(8), "W2": rng.normal(0, 0.5, size=(8, 2)),
              "b2": np.zeros(2)}
    history = loss_history(mlp_loss_grad, params, X, labels, MlpHyper(hidden=8, epochs=30), seed=0)
    assert len(history) == 30
    assert history[-1] < history[0]


def test_feature_layout():
    layout = FeatureLayout()
    assert layout.n_tabular == 6 + 64
    assert layout.n_channels == 2
    assert layout.names[layout.duration_index] == "duration"
    assert FeatureLayout(with_dwt=False).n_tabular == 6
    with pytest.raises(ValueError):
        FeatureLayout(points=60)


def test_resample_segment():
    assert list(resample_segment(np.arange(8), 4)) == [0.5, 2.5, 4.5, 6.5]
    assert list(resample_segment([1, 2, 3], 4)) == [1.0, 2.0, 3.0, 3.0]
    with pytest.raises(ValueError):
        resample_segment([], 4)


def test_segment_inputs():
    tabular, series = segment_inputs(np.full(100, 7.0), FeatureLayout())
    assert tabular.shape == (70, )
    assert series.shape == (2, 64)
    assert tabular[5] == 100
    tabular, series = segment_inputs(np.full(100, 7.0), FeatureLayout(with_dwt=False))
    assert tabular.shape == (6, )
    assert series.shape == (1, 64)


def test_build_dataset(synthetic):
    assert len(synthetic) == 3 * PER_CLASS
    assert synthetic.label_names == ["a", "b", "c"]
    assert list(synthetic.class_counts()) == [PER_CLASS] * 3
    assert sorted(set(synthetic.durations)) == [40, 80]
    with pytest.raises(DatasetError):
        build_dataset(_synthetic_runs()[:PER_CLASS])


def test_dataset_split(synthetic):
    train, test = synthetic.split(test_size=0.2, seed=0)
    assert len(train) + len(test) == len(synthetic)
    assert list(test.class_counts()) == [3, 3, 3]
    again = synthetic.split(test_size=0.2, seed=0)[1]
    assert np.array_equal(test.tabular, again.tabular)
    with pytest.raises(DatasetError):
        synthetic.subset(np.arange(PER_CLASS)).split()


def test_profile_runs():
    runs = profile_runs(tiny_model(), tiny_schedule(), NpuConfig(), repeats=3, noise=0.05, seed=1)
    assert len(runs) == 9
    assert len(set(run.label for run in runs)) == 3
    assert all(run.model == "tiny" for run in runs)
    again = profile_runs(tiny_model(), tiny_schedule(), NpuConfig(), repeats=3, noise=0.05, seed=1)
    assert all(np.array_equal(a.signal, b.signal) for a, b in zip(runs, again))
    with pytest.raises(ValueError):
        profile_runs(tiny_model(), tiny_schedule(), NpuConfig(), repeats=0)


def test_train_svm(synthetic, svm):
    assert svm.kind == ClassifierKind.SVM
    assert evaluate(svm, synthetic).accuracy >= 0.95


def test_train_mlp(synthetic):
    clf = train_mlp(synthetic, MlpHyper(hidden=16, epochs=100), seed=0)
    assert evaluate(clf, synthetic).accuracy >= 0.95


def test_train_cnn(synthetic):
    clf = train_cnn(synthetic, CnnHyper(filters=4, epochs=100), seed=0)
    assert clf.kind == ClassifierKind.CNN
    assert evaluate(clf, synthetic).accuracy >= 0.9


def test_training_is_seeded(synthetic):
    first = train_svm(synthetic, SvmHyper(epochs=5), seed=4)
    second = train_svm(synthetic, SvmHyper(epochs=5), seed=4)
    assert np.array_equal(first.scores(synthetic), second.scores(synthetic))


def test_training_needs_two_classes(synthetic):
    single = synthetic.subset(np.arange(PER_CLASS))
    with pytest.raises(DatasetError):
        train_svm(single)
    with pytest.raises(DatasetError):
        baseline_time_only(single)


def test_time_only_baseline(synthetic):
    report = evaluate(baseline_time_only(synthetic), synthetic)
    # a and b last equally long; ties go to the lower class
    assert report.accuracy == pytest.approx(2.0 / 3.0)
    assert report.confusion.tolist() == [[PER_CLASS, 0, 0], [PER_CLASS, 0, 0], [0, 0, PER_CLASS]]
    assert report.per_model == {"synthetic": pytest.approx(2.0 / 3.0)}


def test_evaluate_errors(synthetic, svm):
    with pytest.raises(DatasetError):
        evaluate(svm, synthetic.subset([]))
    other = build_dataset(_synthetic_runs(), with_dwt=False)
    with pytest.raises(DatasetError):
        svm.predict(other)


def test_weighted_accuracy():
    assert weighted_accuracy({"x": 1.0, "y": 0.5}, {"x": 1, "y": 3}) == pytest.approx(0.625)
    assert weighted_accuracy({}, {}) == 0.0


def test_save_load_classifier(tmp_path, synthetic, svm):
    path = save_classifier(svm, tmp_path / "svm.clf")
    restored = load_classifier(path)
    assert restored.kind == ClassifierKind.SVM
    assert restored.label_names == svm.label_names
    assert np.array_equal(restored.predict(synthetic), svm.predict(synthetic))
    assert path.read_text().startswith("npuleak-classifier 1 svm 1")


def test_save_load_time_only(tmp_path, synthetic):
    clf = baseline_time_only(synthetic)
    restored = load_classifier(save_classifier(clf, tmp_path / "time.clf"))
    assert np.array_equal(restored.predict(synthetic), clf.predict(synthetic))


def test_load_classifier_errors(tmp_path):
    with pytest.raises(DatasetError):
        load_classifier(tmp_path / "missing.clf")
    bad = tmp_path / "bad.clf"
    bad.write_text(u"something else\n{}\n")
    with pytest.raises(DatasetError):
        load_classifier(bad)
    future_version = tmp_path / "future.clf"
    future_version.write_text(u"npuleak-classifier 9 svm 1\n{}\n")
    with pytest.raises(DatasetError):
        load_classifier(future_version)
    truncated = tmp_path / "truncated.clf"
    truncated.write_text(u"npuleak-classifier 1 svm 1\n{\"kind\": \"svm\"}\n")
    with pytest.raises(DatasetError):
        load_classifier(truncated)


def test_classify_segments(svm):
    rng = np.random.RandomState(7)
    # segments drawn like the training runs of classes a, c and b
    segments = ((40, 100.0), (80, 100.0), (40, 500.0))
    signal = np.concatenate([level + rng.normal(0.0, 5.0, size=length) for length, level in segments])
    predictions = classify_segments(svm, signal, [40, 120])
    assert [(p.start, p.end) for p in predictions] == [(0, 40), (40, 120), (120, 160)]
    assert [p.label for p in predictions] == ["a", "c", "b"]
    assert classify_segments(svm, signal[:0], []) == []


def test_segment_accuracy():
    guessed = [SegmentPrediction(0, 40, "a"), SegmentPrediction(40, 120, "c"), SegmentPrediction(120, 160, "a")]
    truth = [(0, 40, "a"), (40, 120, "c"), (120, 160, "b")]
    assert segment_accuracy(guessed, truth) == pytest.approx(2.0 / 3.0)
    assert segment_accuracy([], truth) == 0.0
    assert segment_accuracy(guessed, []) == 0.0
