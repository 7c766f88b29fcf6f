from ._layers import LayerKind, LayerSpec, ModelSpec
from ._catalog import CATALOG_COLUMNS, DATA_DIR, MODEL_NAMES, catalog_path, load_model, parse_catalog
from ._tiling import (TileConfig, activation_footprint, check_legal, config_grid, divisors, enumerate_tile_configs,
                      layer_dims, spatial_steps, tile_payloads, tiles_for)
from ._boundaries import BoundaryClass, BoundaryLabel, label_boundaries
