from .bench import LATENCY_CSV_HEADER, LatencyStats, bench_latency, write_latency_csv
from .persist import FORMAT_VERSION, MAGIC, load_model, save_model
from .ring import RingWindow, StreamingPredictor, stream_trial

__all__ = [
    "LATENCY_CSV_HEADER", "LatencyStats", "bench_latency", "write_latency_csv",
    "FORMAT_VERSION", "MAGIC", "load_model", "save_model",
    "RingWindow", "StreamingPredictor", "stream_trial",
]
