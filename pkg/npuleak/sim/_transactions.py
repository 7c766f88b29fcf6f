# coding=utf-8
"""This module contains the DMA transaction log."""

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

# Third-party imports
import numpy as np

# Local imports
from .._json import JsonEnum


class TxnKind(JsonEnum):
    READ = "read"
    WRITE = "write"


class Authenticity(JsonEnum):
    REAL = "real"
    FAKE = "fake"


class DmaTransaction(
        collections.namedtuple("DmaTransaction",
                               ["t_start", "duration", "bytes", "kind", "authenticity", "payload", "layer_id"])):
    """
    One DMA transfer. bytes is what the bandwidth counter sees; payload is the share of it that is real
    demand (less than bytes for a padded quantum, 0 for a fake one). layer_id is -1 for fake transfers.
    """
    __slots__ = ()

    def __new__(cls, t_start, duration, bytes, kind=TxnKind.READ, authenticity=Authenticity.REAL, payload=None,
                layer_id=-1):
        kind = kind if isinstance(kind, TxnKind) else TxnKind.parse(kind)
        authenticity = authenticity if isinstance(authenticity, Authenticity) else Authenticity.parse(authenticity)
        if payload is None:
            payload = bytes if authenticity == Authenticity.REAL else 0
        return super(DmaTransaction, cls).__new__(cls, t_start, duration, bytes, kind, authenticity, payload,
                                                  layer_id)

    @property
    def t_end(self):
        return self.t_start + self.duration


_KINDS = [TxnKind.READ, TxnKind.WRITE]
_COLUMNS = ("t_start", "duration", "bytes", "kind", "fake", "payload", "layer_id")


class TransactionLog(object):
    """
    An immutable, time-ordered list of DmaTransaction stored column-wise.

    Indexing with an int gives a DmaTransaction; slicing or masking gives another TransactionLog.
    """

    def __init__(self, t_start=(), duration=(), bytes=(), kind=(), fake=(), payload=None, layer_id=None):
        t_start = np.array(t_start, dtype=np.int64)
        n = len(t_start)
        columns = {
            "t_start": t_start,
            "duration": np.array(duration, dtype=np.int64),
            "bytes": np.array(bytes, dtype=np.int64),
            "kind": np.array(kind, dtype=np.int8),
            "fake": np.array(fake, dtype=bool),
            "payload": np.array(bytes if payload is None else payload, dtype=np.int64),
            "layer_id": np.full(n, -1, dtype=np.int64) if layer_id is None else np.array(layer_id, np.int64),
        }
        for name, column in columns.items():
            if len(column) != n:
                raise ValueError("Column '{0}' has {1} entries, expected {2}".format(name, len(column), n))
        order = np.argsort(columns["t_start"], kind="mergesort")
        if n and np.any(order != np.arange(n)):
            columns = dict((name, column[order]) for name, column in columns.items())
        for column in columns.values():
            column.setflags(write=False)
        self._columns = columns

    @classmethod
    def from_transactions(cls, txns):
        txns = list(txns)
        return cls(t_start=[t.t_start for t in txns],
                   duration=[t.duration for t in txns],
                   bytes=[t.bytes for t in txns],
                   kind=[_KINDS.index(t.kind) for t in txns],
                   fake=[t.authenticity == Authenticity.FAKE for t in txns],
                   payload=[t.payload for t in txns],
                   layer_id=[t.layer_id for t in txns])

    @classmethod
    def concat(cls, logs):
        logs = list(logs)
        if not logs:
            return cls()
        return cls(**dict((name, np.concatenate([log._columns[name] for log in logs])) for name in _COLUMNS))

    def column(self, name):
        return self._columns[name]

    @property
    def t_start(self):
        return self._columns["t_start"]

    @property
    def duration(self):
        return self._columns["duration"]

    @property
    def t_end(self):
        return self._columns["t_start"] + self._columns["duration"]

    @property
    def bytes(self):
        return self._columns["bytes"]

    @property
    def payload(self):
        return self._columns["payload"]

    @property
    def is_read(self):
        return self._columns["kind"] == 0

    @property
    def is_fake(self):
        return self._columns["fake"]

    @property
    def layer_id(self):
        return self._columns["layer_id"]

    def reads(self):
        return self[self.is_read]

    def writes(self):
        return self[~self.is_read]

    def real(self):
        return self[~self.is_fake]

    def fake(self):
        return self[self.is_fake]

    def for_layer(self, layer_id):
        return self[self.layer_id == layer_id]

    @property
    def end_cycle(self):
        return int(self.t_end.max()) if len(self) else 0

    def __len__(self):
        return len(self._columns["t_start"])

    def __iter__(self):
        for index in range(len(self)):
            yield self[index]

    def __getitem__(self, key):
        if isinstance(key, (int, np.integer)):
            c = self._columns
            return DmaTransaction(int(c["t_start"][key]), int(c["duration"][key]), int(c["bytes"][key]),
                                  _KINDS[c["kind"][key]], Authenticity.FAKE if c["fake"][key] else Authenticity.REAL,
                                  int(c["payload"][key]), int(c["layer_id"][key]))
        return TransactionLog(**dict((name, self._columns[name][key]) for name in _COLUMNS))

    def __eq__(self, other):
        if not isinstance(other, TransactionLog):
            return NotImplemented
        return all(np.array_equal(self._columns[name], other._columns[name]) for name in _COLUMNS)

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return "TransactionLog({0} transactions, {1} read bytes)".format(len(self), int(self.reads().bytes.sum()))
