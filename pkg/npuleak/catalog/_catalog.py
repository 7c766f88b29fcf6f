# coding=utf-8
"""This module loads DNN layer catalogs shipped with npuleak or supplied as files."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import csv
import io
import logging

# Third-party imports
from pathlib2 import Path

# Local imports
from ._layers import LayerSpec, ModelSpec
from ..exceptions import CatalogError

DATA_DIR = Path(__file__).parent.joinpath("data")

MODEL_NAMES = ("alexnet", "vgg11", "vgg16", "resnet18", "resnet34", "resnet50")

CATALOG_COLUMNS = ("id", "kind", "in_c", "out_c", "kh", "kw", "in_h", "in_w", "stride")


def catalog_path(name):
    """Path of a shipped catalog, by model name."""
    return DATA_DIR.joinpath("{0}.csv".format(name.lower()))


def load_model(name_or_path, element_size=1):
    """
    Load and validate a model catalog.

    :param name_or_path: One of MODEL_NAMES, or the path of a catalog file.
    :param element_size: Bytes per weight; 1 for 8-bit quantised models.
    :returns: a validated ModelSpec
    """
    name_or_path = str(name_or_path)
    if name_or_path.lower() in MODEL_NAMES:
        path = catalog_path(name_or_path)
        name = name_or_path.lower()
    else:
        path = Path(name_or_path)
        if not path.suffix:
            raise CatalogError("Unknown model '{0}'; expected one of: {1}".format(name_or_path,
                                                                                  ", ".join(MODEL_NAMES)))
        if not path.exists():
            raise CatalogError("Catalog file does not exist: {0}".format(path), path=path)
        name = path.stem

    with io.open(str(path), "r", encoding="utf-8") as fin:
        model = parse_catalog(fin, name, element_size=element_size, path=path)

    _get_logger().debug("Loaded %r from %s", model, path)
    return model


def parse_catalog(lines, name, element_size=1, path=None):
    """
    Parse catalog text: one layer per line, `id,kind,in_c,out_c,kh,kw,in_h,in_w,stride`, `#` starts a comment.
    """
    layers = []
    numbered = ((number, line.split("#", 1)[0].strip()) for number, line in enumerate(lines, 1))
    for number, text in numbered:
        if not text:
            continue

        row = next(csv.reader([text]))
        if len(row) != len(CATALOG_COLUMNS):
            raise CatalogError("Expected {0} fields, found {1}".format(len(CATALOG_COLUMNS), len(row)), path=path,
                               line=number)

        values = [v.strip() for v in row]
        try:
            numbers = []
            for column, value in zip(CATALOG_COLUMNS, values):
                if column == "kind":
                    continue
                numbers.append(_parse_int(value, column, path, number))
            layer = LayerSpec(numbers[0], values[1], *numbers[1:])
        except ValueError as ve:
            raise CatalogError(str(ve), path=path, line=number, field="kind", innerError=ve)

        try:
            layer.validate()
        except CatalogError as ce:
            raise CatalogError(str(ce), path=path, line=number, field=ce.field, innerError=ce)
        layers.append(layer)

    return ModelSpec(name, layers, element_size=element_size).validate()


def _parse_int(value, column, path, line):
    try:
        return int(value)
    except ValueError as ve:
        raise CatalogError("'{0}' is not an integer".format(value), path=path, line=line, field=column,
                           innerError=ve)


def _get_logger():
    return logging.getLogger("npuleak.catalog")
