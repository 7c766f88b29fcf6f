# coding=utf-8
"""This module contains the JsonEnum base class."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
from enum import Enum


class JsonEnum(Enum):
    """Enum whose members serialise to their value and parse back from it (case-insensitive)."""

    @classmethod
    def parse(cls, text):
        key = str(text).strip().lower()
        for member in cls:
            if member.value == key:
                return member
        raise ValueError("'{0}' is not a valid {1}; expected one of: {2}".format(
            text, cls.__name__, ", ".join(m.value for m in cls)))

    def __str__(self):
        return self.value

    def _to_jsonable(self):
        return self.value
