# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins import *
from future.builtins.disabled import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

import pytest

from npuleak.catalog import (MODEL_NAMES, BoundaryClass, LayerKind, LayerSpec, ModelSpec, TileConfig, check_legal,
                             divisors, enumerate_tile_configs, label_boundaries, load_model, parse_catalog,
                             tile_payloads, tiles_for)
from npuleak.exceptions import CatalogError, ScheduleError, TileConfigError
from npuleak.sim import NpuConfig
from npuleak.tuning import load_schedule

from ..helpers import tiny_model


@pytest.fixture(scope="module")
def alexnet():
    return load_model("alexnet")


@pytest.mark.parametrize(("name"), MODEL_NAMES)
def test_shipped_catalogs_load(name):
    model = load_model(name)
    assert model.name == name
    assert len(model.weight_layers) > 0
    assert [layer.id for layer in model.layers] == list(range(len(model.layers)))


def test_load_model_unknown_name():
    with pytest.raises(CatalogError, match="lenet"):
        load_model("lenet")


def test_alexnet_dimensions(alexnet):
    first = alexnet.layer(0)
    assert first.kind == LayerKind.CONV
    assert first.output_shape == (64, 56, 56)
    assert first.weight_bytes == 3 * 64 * 11 * 11
    assert len(alexnet.weight_layers) == 5


#yapf: disable
@pytest.mark.parametrize(("lines", "line", "field"), [
    (["0,conv,3,8,3,3,8,8,1", "1,conv,8,8,3,3,8,8"], 2, None),
    (["0,conv,3,8,3,3,8,8,1", "1,pool,8,8,2,2,8,8,x"], 2, "stride"),
    (["0,conv,3,8,3,3,8,8,1", "1,linear,8,8,1,1,1,1,1"], 2, "kind"),
    (["# header", "0,conv,3,0,3,3,8,8,1"], 2, "out_c"),
])
#yapf: enable
def test_parse_catalog_errors(lines, line, field):
    with pytest.raises(CatalogError) as info:
        parse_catalog(lines, "broken")
    assert info.value.line == line
    if field is not None:
        assert info.value.field is not None


def test_parse_catalog_rejects_bad_wiring():
    with pytest.raises(CatalogError, match="matches no earlier layer"):
        parse_catalog(["0,conv,3,8,3,3,8,8,1", "1,conv,16,8,3,3,8,8,1"], "miswired")


def test_tiles_for_exact_and_padded():
    layer = LayerSpec(0, "conv", 48, 96, 3, 3, 8, 8, 1)
    assert tiles_for(layer, TileConfig(32, 16, 8, 8)) == (3 * 3, 32 * 16 * 9)
    assert tiles_for(layer, TileConfig(64, 32, 8, 8)) == (2 * 2, 64 * 32 * 9)

    payloads = tile_payloads(layer, TileConfig(64, 32, 8, 8))
    assert len(payloads) == 4
    assert sum(payloads) == layer.weight_bytes


def test_tiles_for_clamps_large_factors():
    layer = LayerSpec(0, "conv", 3, 64, 11, 11, 224, 224, 4)
    assert tiles_for(layer, TileConfig(64, 32, 14, 14)) == (1, 64 * 3 * 121)


def test_tiles_for_rejects_non_weight_layer():
    with pytest.raises(TileConfigError):
        tiles_for(LayerSpec(0, "pool", 8, 8, 2, 2, 8, 8, 2), TileConfig(1, 1, 1, 1))


def test_check_legal_scratchpads():
    layer = LayerSpec(0, "conv", 512, 512, 3, 3, 14, 14, 1)
    with pytest.raises(TileConfigError, match="weight bytes"):
        check_legal(layer, TileConfig(512, 512, 14, 14), NpuConfig())
    assert check_legal(layer, TileConfig(64, 64, 14, 14), NpuConfig()) == TileConfig(64, 64, 14, 14)


def test_enumerate_matches_divisor_oracle():
    npu = NpuConfig()
    layer = tiny_model().layer(2)
    configs = enumerate_tile_configs(layer, npu)
    expected = [
        TileConfig(a, b, c, d) for a in divisors(32) for b in divisors(16) for c in divisors(16) for d in divisors(16)
    ]
    assert configs == sorted(expected)


def test_enumerate_with_padding_adds_powers_of_two():
    layer = LayerSpec(0, "conv", 3, 12, 3, 3, 6, 6, 1)
    exact = enumerate_tile_configs(layer, NpuConfig())
    padded = enumerate_tile_configs(layer, NpuConfig(), allow_padding=True)
    assert set(exact) < set(padded)
    assert TileConfig(8, 2, 4, 4) in padded
    assert all(cfg.is_exact(layer) for cfg in exact)


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]


def test_alexnet_reference_boundaries(alexnet):
    labels = label_boundaries(alexnet, load_schedule(alexnet))
    assert [label.boundary_class for label in labels] == [
        BoundaryClass.T1_DIFF_TILE_SIZE, BoundaryClass.T1_DIFF_TILE_SIZE, BoundaryClass.T2_SAME_SIZE_DIFF_COUNT,
        BoundaryClass.T1_DIFF_TILE_SIZE
    ]
    assert labels[2].left == (36, 18432)
    assert labels[2].right == (48, 18432)


#yapf: disable
@pytest.mark.parametrize(("name", "easy", "all_"), [
    ("alexnet", 3, 4),
    ("vgg11", 5, 6),
    ("vgg16", 8, 11),
])
#yapf: enable
def test_reference_boundary_counts(name, easy, all_):
    model = load_model(name)
    labels = label_boundaries(model, load_schedule(model))
    assert len(labels) == all_
    assert sum(label.is_easy for label in labels) == easy


def test_boundary_classes():
    model = tiny_model()
    schedule = {0: TileConfig(16, 4, 16, 16), 2: TileConfig(8, 8, 8, 8), 4: TileConfig(8, 16, 8, 8)}
    labels = label_boundaries(model, schedule)
    # (1, 576) -> (8, 576) -> (8, 1152)
    assert labels[0].boundary_class == BoundaryClass.T2_SAME_SIZE_DIFF_COUNT
    assert labels[1].boundary_class == BoundaryClass.T1_DIFF_TILE_SIZE
    assert [label.between for label in labels] == [(0, 2), (2, 4)]


def test_identical_layers_are_t3():
    model = ModelSpec("twins", [LayerSpec(0, "conv", 8, 8, 3, 3, 8, 8, 1),
                                LayerSpec(1, "conv", 8, 8, 3, 3, 8, 8, 1)])
    labels = label_boundaries(model, {0: TileConfig(4, 4, 8, 8), 1: TileConfig(4, 4, 8, 8)})
    assert labels[0].boundary_class == BoundaryClass.T3_IDENTICAL
    assert not labels[0].is_easy

def test_label_boundaries_missing_layer():
    with pytest.raises(ScheduleError):
        label_boundaries(tiny_model(), {0: TileConfig(1, 1, 1, 1)})
