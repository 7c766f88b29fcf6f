from ._config import ShaperConfig
from ._shaper import (ShapedReadChannel, ShapedResult, ShapedWriteChannel, overhead, peak_demand_Bps, shape,
                      shaped_trace, window_deviation)
