from ._schedule import SCHEDULE_COLUMNS, TileSchedule, load_schedule, reference_schedule_path, write_schedule
from ._tune import ExploreResult, LayerSpace, constant_tile_schedule, explore, tune
