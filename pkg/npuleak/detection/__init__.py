from ._profile import (DEFAULT_CONFIGS_PER_LAYER, ProfileDb, ProfileEntry, build_profile_db, group_label,
                       layer_groups, profile_configs)
from ._detect import (BoundarySet, DetectorParams, adaptive_threshold, burst_onsets, change_statistic,
                      detect_boundaries, encode_windows, find_candidates, refine_position, validate_candidates)
from ._score import (BOUNDARY_REPORT_COLUMNS, DetectionScore, boundary_report_row, match_boundaries,
                     score_boundaries, score_easy)
