# coding=utf-8
"""This module contains helpers for fanning work out across processes with order-stable results."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

import collections
import multiprocessing as _mp
import traceback as _tb


class Outcome(collections.namedtuple("Outcome", ["item", "value", "exception", "traceback"])):
    """Result of one work item; exactly one of value/exception is meaningful."""

    @property
    def failed(self):
        return self.exception is not None


def _invoke(packed):
    """Runs one work item, catching the exception so it can be made available to the calling process."""
    func, item = packed
    try:
        return Outcome(item, func(item), None, None)
    except Exception as e:
        return Outcome(item, None, e, _tb.format_exc())


def map_ordered(func, items, workers=1):
    """
    Apply func to every item, returning Outcomes in item order regardless of worker count.

    func must be a picklable module-level callable when workers > 1.
    """
    items = list(items)
    packed = [(func, item) for item in items]

    if workers is None or workers <= 1 or len(items) <= 1:
        return [_invoke(p) for p in packed]

    pool = _mp.Pool(processes=min(workers, len(items)))
    try:
        return pool.map(_invoke, packed)
    finally:
        pool.close()
        pool.join()
