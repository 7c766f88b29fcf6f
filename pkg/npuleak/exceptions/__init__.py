from .npu_leak_error import NpuLeakError
from .catalog_error import CatalogError
from .dataset_error import DatasetError
from .experiment_error import ExperimentError
from .infeasible_target_error import InfeasibleTargetError
from .profile_error import ProfileError
from .schedule_error import ScheduleError
from .tile_config_error import TileConfigError
