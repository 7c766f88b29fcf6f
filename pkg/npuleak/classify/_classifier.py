# coding=utf-8
"""This module contains trained layer classifiers, their evaluation and their file format."""

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
import io
import json
import logging

# Third-party imports
import numpy as np

from pathlib2 import Path
from sklearn.preprocessing import StandardScaler

# Local imports
from .._atomic import atomic_open
from .._json import JsonEnum, ToJsonEncoder
from ..exceptions import DatasetError
from ._dataset import Dataset
from ._learners import (CnnHyper, MlpHyper, SvmHyper, cnn_scores, fit_cnn, fit_mlp, fit_svm, mlp_scores,
                        svm_scores)
from ._segments import FeatureLayout, segment_inputs

FILE_MAGIC = "npuleak-classifier"
FILE_VERSION = 1


def _get_logger():
    return logging.getLogger("npuleak.classify")


class ClassifierKind(JsonEnum):
    SVM = "svm"
    MLP = "mlp"
    CNN = "cnn"
    TIME_ONLY = "time_only"


class TrainedClassifier(object):
    """A fitted classifier with the standardisation it was trained with."""

    def __init__(self, kind, params, scaling, layout, label_names, seed, hyper=None):
        self.kind = kind if isinstance(kind, ClassifierKind) else ClassifierKind.parse(kind)
        self.params = dict((k, np.asarray(v, dtype=float)) for k, v in params.items())
        self.scaling = dict((k, np.asarray(v, dtype=float)) for k, v in scaling.items())
        self.layout = FeatureLayout(*layout)
        self.label_names = list(label_names)
        self.seed = seed
        self.hyper = dict(hyper or {})

    def _check(self, ds):
        if self.kind != ClassifierKind.TIME_ONLY and ds.layout != self.layout:
            raise DatasetError("Dataset layout {0} does not match the classifier's {1}".format(ds.layout,
                                                                                           self.layout))

    def _tabular(self, tabular):
        return (tabular - self.scaling["mean"]) / self.scaling["scale"]

    def scores(self, ds):
        """Per-class scores of every sample (higher is more likely)."""
        self._check(ds)
        if self.kind == ClassifierKind.TIME_ONLY:
            return -np.abs(ds.durations[:, None] - self.params["class_durations"][None, :])
        if self.kind == ClassifierKind.SVM:
            return svm_scores(self.params, self._tabular(ds.tabular))
        if self.kind == ClassifierKind.MLP:
            return mlp_scores(self.params, self._tabular(ds.tabular))
        return cnn_scores(self.params, _cnn_inputs(ds, self.scaling))

    def predict(self, ds):
        """Index of the best-scoring class of every sample; ties go to the lower index."""
        return np.argmax(self.scores(ds), axis=1)

    def _to_jsonable(self):
        return collections.OrderedDict([("kind", self.kind), ("layout", self.layout._asdict()),
                                        ("label_names", self.label_names), ("seed", self.seed),
                                        ("hyper", self.hyper), ("scaling", self.scaling), ("params", self.params)])

    def __repr__(self):
        return "TrainedClassifier({0}, {1} classes, with_dwt={2})".format(self.kind.value, len(self.label_names),
                                                                         self.layout.with_dwt)


def _require_classes(ds):
    if len(np.unique(ds.labels)) < 2:
        raise DatasetError("Training needs samples of at least two classes")


def _tabular_scaling(ds):
    scaler = StandardScaler().fit(ds.tabular)
    return {"mean": scaler.mean_, "scale": scaler.scale_}


def _series_scaling(ds):
    mean = ds.series.mean(axis=(0, 2))
    scale = ds.series.std(axis=(0, 2))
    return {"series_mean": mean, "series_scale": np.where(scale > 0, scale, 1.0)}


def _cnn_inputs(ds, scaling):
    series = (ds.series - scaling["series_mean"][None, :, None]) / scaling["series_scale"][None, :, None]
    n_scalar = ds.layout.n_scalar
    scalars = (ds.tabular[:, :n_scalar] - scaling["mean"][:n_scalar]) / scaling["scale"][:n_scalar]
    return series, scalars


def train_svm(ds, hyper=None, seed=0):
    """One-vs-rest linear SVM: hinge loss plus L2, mini-batch subgradient descent."""
    _require_classes(ds)
    hyper = hyper or SvmHyper()
    scaling = _tabular_scaling(ds)
    params, hyper = fit_svm((ds.tabular - scaling["mean"]) / scaling["scale"], ds.labels, ds.n_classes, hyper,
                            seed)
    return TrainedClassifier(ClassifierKind.SVM, params, scaling, ds.layout, ds.label_names, seed, hyper._asdict())


def train_mlp(ds, hyper=None, seed=0):
    """One ReLU hidden layer and a softmax output, trained on cross-entropy."""
    _require_classes(ds)
    hyper = hyper or MlpHyper()
    scaling = _tabular_scaling(ds)
    params, hyper = fit_mlp((ds.tabular - scaling["mean"]) / scaling["scale"], ds.labels, ds.n_classes, hyper,
                            seed)
    return TrainedClassifier(ClassifierKind.MLP, params, scaling, ds.layout, ds.label_names, seed, hyper._asdict())


def train_cnn(ds, hyper=None, seed=0):
    """
    One convolution layer over the resampled segment (and its wavelet coefficients), global average pooling,
    then a softmax layer that also sees the segment statistics.
    """
    _require_classes(ds)
    hyper = hyper or CnnHyper()
    scaling = _tabular_scaling(ds)
    scaling.update(_series_scaling(ds))
    series, scalars = _cnn_inputs(ds, scaling)
    params, hyper = fit_cnn(series, scalars, ds.labels, ds.n_classes, hyper, seed)
    return TrainedClassifier(ClassifierKind.CNN, params, scaling, ds.layout, ds.label_names, seed, hyper._asdict())


def baseline_time_only(ds):
    """Nearest class-mean duration."""
    _require_classes(ds)
    durations = ds.durations
    class_durations = np.array([
        durations[ds.labels == c].mean() if np.any(ds.labels == c) else np.inf for c in range(ds.n_classes)
    ])
    return TrainedClassifier(ClassifierKind.TIME_ONLY, {"class_durations": class_durations}, {}, ds.layout,
                             ds.label_names, None)


TRAINERS = {
    ClassifierKind.SVM: train_svm,
    ClassifierKind.MLP: train_mlp,
    ClassifierKind.CNN: train_cnn,
}


class EvalReport(collections.namedtuple("EvalReport", ["accuracy", "confusion", "label_names", "per_model"])):
    """Accuracy, confusion matrix (rows true, columns predicted) and accuracy per source model."""
    __slots__ = ()


def evaluate(clf, ds):
    if len(ds) == 0:
        raise DatasetError("Cannot evaluate on an empty dataset")
    if ds.label_names != clf.label_names:
        raise DatasetError("Dataset classes do not match the classifier's classes")
    predicted = clf.predict(ds)
    confusion = np.zeros((ds.n_classes, ds.n_classes), dtype=np.int64)
    np.add.at(confusion, (ds.labels, predicted), 1)
    correct = predicted == ds.labels

    per_model = collections.OrderedDict()
    models = np.array([m.get("model", "") for m in ds.meta])
    for model in sorted(set(models)):
        per_model[model] = float(correct[models == model].mean())
    return EvalReport(float(np.trace(confusion)) / confusion.sum(), confusion, list(ds.label_names), per_model)


def weighted_accuracy(accuracies, weights):
    """Weighted mean of per-model accuracies (weights by model name)."""
    total = float(sum(weights[name] for name in accuracies))
    return sum(accuracies[name] * weights[name] for name in accuracies) / total if total else 0.0


def save_classifier(clf, path):
    """
    Write a classifier: one header line (magic, version, kind, with_dwt), then the parameters as JSON.
    """
    path = Path(str(path))
    with atomic_open(path) as fout:
        fout.write("{0} {1} {2} {3}\n".format(FILE_MAGIC, FILE_VERSION, clf.kind.value, int(clf.layout.with_dwt)))
        fout.write(json.dumps(clf, cls=ToJsonEncoder, sort_keys=True))
        fout.write("\n")
    return path


def load_classifier(path):
    path = Path(str(path))
    if not path.exists():
        raise DatasetError("Classifier file does not exist: {0}".format(path))
    with io.open(str(path), "r", encoding="utf-8") as fin:
        header = fin.readline().split()
        body = fin.read()
    if len(header) != 4 or header[0] != FILE_MAGIC:
        raise DatasetError("{0} is not a classifier file".format(path))
    if int(header[1]) != FILE_VERSION:
        raise DatasetError("{0}: unsupported classifier file version {1}".format(path, header[1]))
    try:
        values = json.loads(body)
        layout = FeatureLayout(**values["layout"])
        clf = TrainedClassifier(values["kind"], values["params"], values["scaling"], layout, values["label_names"],
                                values["seed"], values["hyper"])
    except (ValueError, KeyError, TypeError) as e:
        raise DatasetError("Malformed classifier file {0}: {1}".format(path, e), e)
    if clf.kind.value != header[2] or int(clf.layout.with_dwt) != int(header[3]):
        raise DatasetError("{0}: header does not match the parameters".format(path))
    return clf


SegmentPrediction = collections.namedtuple("SegmentPrediction", ["start", "end", "label"])


def classify_segments(clf, signal, positions):
    """Classify the segments a trace is cut into at the given boundary positions."""
    signal = np.asarray(getattr(signal, "read_bytes", signal))
    cuts = [0] + [int(p) for p in positions if 0 < p < len(signal)] + [len(signal)]
    spans = [(a, b) for a, b in zip(cuts, cuts[1:]) if b > a]
    if not spans:
        return []
    tabular, series = zip(*[segment_inputs(signal[a:b], clf.layout) for a, b in spans])
    ds = Dataset(np.vstack(tabular), np.stack(series), np.zeros(len(spans), dtype=np.int64), clf.label_names,
                 clf.layout)
    return [SegmentPrediction(a, b, clf.label_names[p]) for (a, b), p in zip(spans, clf.predict(ds))]


def segment_accuracy(predictions, truth):
    """
    Share of predicted segments whose label equals the label of the true segment they overlap most.

    :param truth: sequence of (start, end, label).
    """
    if not predictions:
        return 0.0
    correct = 0
    for prediction in predictions:
        overlaps = [(min(prediction.end, end) - max(prediction.start, start), label) for start, end, label in truth]
        best = max(overlaps, key=lambda o: o[0]) if overlaps else (0, None)
        correct += int(best[0] > 0 and best[1] == prediction.label)
    return correct / float(len(predictions))
