# coding=utf-8
"""This module contains precision and recall scoring of detected boundaries."""

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


class DetectionScore(collections.namedtuple("DetectionScore", ["precision", "recall", "matches", "predicted",
                                                                 "true"])):
    """Precision (None when nothing was predicted), recall and the matched (predicted, true) position pairs."""
    __slots__ = ()

    @property
    def matched(self):
        return len(self.matches)


def _positions(value):
    positions = getattr(value, "positions", None)
    if positions is None:
        positions = getattr(value, "boundary_windows", value)
    return [int(p) for p in positions]


def _ratio(numerator, denominator, empty):
    return numerator / float(denominator) if denominator else empty


def _match_indices(predicted, truth, tolerance):
    """(prediction index, truth index) pairs of the greedy matching; both sequences sorted."""
    if tolerance < 0:
        raise ValueError("tolerance must not be negative, got {0!r}".format(tolerance))
    pairs = []
    i = j = 0
    while i < len(truth) and j < len(predicted):
        if abs(predicted[j] - truth[i]) <= tolerance:
            pairs.append((j, i))
            i += 1
            j += 1
        elif predicted[j] < truth[i]:
            j += 1
        else:
            i += 1
    return pairs


def match_boundaries(predicted, truth, tolerance):
    """
    Maximum one-to-one matching of sorted predictions to sorted true positions with |p - t| <= tolerance,
    taken greedily from the earliest positions.
    """
    return [(predicted[j], truth[i]) for j, i in _match_indices(predicted, truth, tolerance)]


def score_boundaries(predicted, truth, tolerance=64):
    """
    Score predicted boundaries against the truth. Precision is None (not available) when nothing was predicted.

    :param predicted: a BoundarySet or a sequence of window indices.
    :param truth: a SimResult (its boundary_windows) or a sequence of window indices.
    """
    predicted = sorted(_positions(predicted))
    truth = sorted(_positions(truth))
    matches = match_boundaries(predicted, truth, tolerance)
    return DetectionScore(precision=_ratio(len(matches), len(predicted), None),
                          recall=_ratio(len(matches), len(truth), 1.0),
                          matches=matches,
                          predicted=len(predicted),
                          true=len(truth))


def score_easy(predicted, truth, easy, tolerance=64):
    """
    Score against the easy (different tile size) boundaries only.

    Predictions are matched against all true boundaries; those matched to a boundary that is not easy are
    neither credited nor counted as false. Recall is over all true boundaries, so it cannot exceed the easy
    share of them.

    :param easy: one flag per true boundary, in the order the true boundaries are given.
    """
    truth = _positions(truth)
    easy = list(easy)
    if len(easy) != len(truth):
        raise ValueError("Need one easy flag per true boundary ({0} != {1})".format(len(easy), len(truth)))
    order = sorted(range(len(truth)), key=lambda i: truth[i])
    truth = [truth[i] for i in order]
    easy = [bool(easy[i]) for i in order]
    predicted = sorted(_positions(predicted))

    pairs = _match_indices(predicted, truth, tolerance)
    easy_matches = [(predicted[j], truth[i]) for j, i in pairs if easy[i]]
    counted = len(predicted) - (len(pairs) - len(easy_matches))
    return DetectionScore(precision=_ratio(len(easy_matches), counted, None),
                          recall=_ratio(len(easy_matches), len(truth), 1.0),
                          matches=easy_matches,
                          predicted=counted,
                          true=sum(easy))


BOUNDARY_REPORT_COLUMNS = ("model", "easy_precision", "easy_recall", "all_precision", "all_recall")


def boundary_report_row(model_name, easy_score, all_score):
    """One row in the layout model | easy P | easy R | all P | all R."""
    return (model_name, easy_score.precision, easy_score.recall, all_score.precision, all_score.recall)
