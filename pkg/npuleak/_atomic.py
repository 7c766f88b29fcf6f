# coding=utf-8
"""Whole-file writes: output goes to a temporary file beside the target, which is renamed over it on success."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import contextlib
import io
import os
import tempfile

# Third-party imports
from pathlib2 import Path


@contextlib.contextmanager
def atomic_open(path, newline=None, binary=False):
    """
    Open path for writing through a temporary file in the same directory.

    Readers never see a partial file: the temporary file replaces path only if the block exits cleanly.
    """
    path = Path(str(path))
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix="." + path.name + ".", suffix=".tmp", dir=str(path.parent))
    os.close(fd)
    try:
        if binary:
            with io.open(tmp_name, "wb") as fout:
                yield fout
        else:
            with io.open(tmp_name, "w", encoding="utf-8", newline=newline) as fout:
                yield fout
        os.replace(tmp_name, str(path))
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise


@contextlib.contextmanager
def atomic_path(path):
    """Yield a temporary path for libraries that write by file name; it replaces path on success."""
    path = Path(str(path))
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix="." + path.stem + ".", suffix=path.suffix, dir=str(path.parent))
    os.close(fd)
    os.remove(tmp_name)
    try:
        yield Path(tmp_name)
        os.replace(tmp_name, str(path))
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
