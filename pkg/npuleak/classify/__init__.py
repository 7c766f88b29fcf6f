# coding=utf-8
"""Layer classification from trace segments: datasets, learners and evaluation."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

from ._segments import FeatureLayout, SEGMENT_STAT_NAMES, resample_segment, segment_inputs
from ._dataset import (DEFAULT_NOISE, DEFAULT_REPEATS, Dataset, SegmentRun, build_dataset, class_label,
                       profile_runs)
from ._learners import CnnHyper, MlpHyper, SvmHyper, loss_history
from ._classifier import (ClassifierKind, EvalReport, SegmentPrediction, TRAINERS, TrainedClassifier,
                          baseline_time_only, classify_segments, evaluate, load_classifier, save_classifier,
                          segment_accuracy, train_cnn, train_mlp, train_svm, weighted_accuracy)
