from ._windows import DEFAULT_STRIDE, DEFAULT_WIN_LEN, sliding_windows, window_starts
from ._dwt import haar_dwt, inverse_haar, level_energies, pad_to_levels
from ._features import (DEFAULT_LEVELS, STAT_NAMES, WindowFeatures, default_mask, energy_names, extract_features,
                        feature_columns, feature_matrix, write_features_csv)
from ._codebook import DEFAULT_K, BowHistogram, Codebook, bow_encode, build_codebook
