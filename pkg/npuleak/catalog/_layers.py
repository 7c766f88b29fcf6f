# coding=utf-8
"""This module contains the layer and model descriptors used throughout npuleak."""

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

# Local imports
from .._json import JsonEnum
from ..exceptions import CatalogError


class LayerKind(JsonEnum):
    CONV = "conv"
    DENSE = "dense"
    POOL = "pool"
    ACTIVATION = "activation"
    RESIDUAL_ADD = "residual_add"

    @property
    def loads_weights(self):
        return self in (LayerKind.CONV, LayerKind.DENSE)


_LAYER_FIELDS = [
    "id", "kind", "in_channels", "out_channels", "kernel_h", "kernel_w", "input_h", "input_w", "stride",
    "element_size"
]


def _ceil_div(a, b):
    return -(-a // b)


class LayerSpec(collections.namedtuple("LayerSpec", _LAYER_FIELDS)):
    """
    Dimensions of one DNN layer. Output spatial dims use SAME padding: out = ceil(in / stride).

    Only dimensions and byte counts are modelled; there are no weights or activations.
    """
    __slots__ = ()

    def __new__(cls, id, kind, in_channels, out_channels, kernel_h, kernel_w, input_h, input_w, stride,
                element_size=1):
        kind = kind if isinstance(kind, LayerKind) else LayerKind.parse(kind)
        return super(LayerSpec, cls).__new__(cls, id, kind, in_channels, out_channels, kernel_h, kernel_w, input_h,
                                             input_w, stride, element_size)

    @property
    def loads_weights(self):
        return self.kind.loads_weights

    @property
    def output_h(self):
        return _ceil_div(self.input_h, self.stride)

    @property
    def output_w(self):
        return _ceil_div(self.input_w, self.stride)

    @property
    def weight_bytes(self):
        if not self.loads_weights:
            return 0
        return self.in_channels * self.out_channels * self.kernel_h * self.kernel_w * self.element_size

    @property
    def output_bytes(self):
        return self.out_channels * self.output_h * self.output_w * self.element_size

    @property
    def macs(self):
        if not self.loads_weights:
            return 0
        return (self.out_channels * self.in_channels * self.kernel_h * self.kernel_w * self.output_h *
                self.output_w)

    @property
    def element_ops(self):
        """Work of a layer without weights, in element operations."""
        if self.kind == LayerKind.POOL:
            return self.out_channels * self.output_h * self.output_w * self.kernel_h * self.kernel_w
        if self.loads_weights:
            return 0
        return self.out_channels * self.output_h * self.output_w

    @property
    def input_shape(self):
        return (self.in_channels, self.input_h, self.input_w)

    @property
    def output_shape(self):
        return (self.out_channels, self.output_h, self.output_w)

    @property
    def dims_key(self):
        """Everything that identifies the layer's shape, excluding its position in the model."""
        return (self.kind.value, self.in_channels, self.out_channels, self.kernel_h, self.kernel_w, self.input_h,
                self.input_w, self.stride)

    def describe(self):
        return "{0} {1}->{2} k{3}x{4} @{5}x{6} s{7}".format(self.kind.value, self.in_channels, self.out_channels,
                                                           self.kernel_h, self.kernel_w, self.input_h,
                                                           self.input_w, self.stride)

    def validate(self):
        """Raise CatalogError (with the offending field) if an invariant does not hold."""
        for field in _LAYER_FIELDS[2:]:
            value = getattr(self, field)
            if int(value) != value or value < 1:
                raise CatalogError("Layer {0}: {1} must be a positive integer, got {2!r}".format(
                    self.id, field, value), field=field)

        if not self.loads_weights:
            if self.in_channels != self.out_channels:
                raise CatalogError("Layer {0}: {1} layers must keep the channel count".format(
                    self.id, self.kind.value), field="out_channels")
        if self.kind in (LayerKind.ACTIVATION, LayerKind.RESIDUAL_ADD, LayerKind.DENSE):
            if self.kernel_h != 1 or self.kernel_w != 1:
                raise CatalogError("Layer {0}: {1} layers take a 1x1 kernel".format(self.id, self.kind.value),
                                   field="kh")
        if self.kind == LayerKind.DENSE and (self.input_h != 1 or self.input_w != 1):
            raise CatalogError("Layer {0}: dense layers take a 1x1 input plane".format(self.id), field="in_h")
        return self


class ModelSpec(object):
    """An ordered list of layers with a shared element size."""

    def __init__(self, name, layers, element_size=1):
        self._name = name
        self._element_size = element_size
        self._layers = tuple(layer._replace(element_size=element_size) for layer in layers)
        self._by_id = dict((layer.id, layer) for layer in self._layers)

    @property
    def name(self):
        return self._name

    @property
    def element_size(self):
        return self._element_size

    @property
    def layers(self):
        return self._layers

    @property
    def weight_layers(self):
        return tuple(layer for layer in self._layers if layer.loads_weights)

    @property
    def weight_bytes(self):
        return sum(layer.weight_bytes for layer in self._layers)

    def layer(self, layer_id):
        try:
            return self._by_id[layer_id]
        except KeyError:
            raise KeyError("Model '{0}' has no layer {1}".format(self._name, layer_id))

    def validate(self):
        """
        Check every layer and the wiring between them.

        A layer's input must equal the output of the layer before it, or, for branch layers such as residual
        down-sampling convolutions, the output of some earlier layer.
        """
        if not self._layers:
            raise CatalogError("Model '{0}' has no layers".format(self._name))
        if not self.weight_layers:
            raise CatalogError("Model '{0}' has no weight-loading layers".format(self._name))

        seen_shapes = []
        for index, layer in enumerate(self._layers):
            if layer.id != index:
                raise CatalogError("Model '{0}': layer ids must run 0..n-1 in order, found {1} at position {2}".format(
                    self._name, layer.id, index), field="id")
            layer.validate()
            if seen_shapes and layer.input_shape not in seen_shapes:
                raise CatalogError("Model '{0}': layer {1} input {2} matches no earlier layer output".format(
                    self._name, layer.id, layer.input_shape), field="in_c")
            seen_shapes.append(layer.output_shape)
        return self

    def __len__(self):
        return len(self._layers)

    def __iter__(self):
        return iter(self._layers)

    def __repr__(self):
        return "ModelSpec({0!r}, {1} layers, {2} weight-loading)".format(self._name, len(self._layers),
                                                                       len(self.weight_layers))
