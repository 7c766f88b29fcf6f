from ._config import NpuConfig
from ._transactions import Authenticity, DmaTransaction, TransactionLog, TxnKind
from ._counter import (DEFAULT_CLOCK_HZ, DEFAULT_WINDOW_US, TRACE_COLUMNS, BandwidthTrace, count_read_bursts,
                       inject_noise, read_trace_csv, sample_counter, window_cycles, write_trace_csv)
from ._cost import (TileCost, elementwise_cycles, layer_cycles, layer_cycles_batch, pipeline_cycles, rank_key,
                    schedule_cycles, tile_cost)
from ._simulate import DmaChannel, LayerSpan, SimResult, run_tiled, simulate_inference
