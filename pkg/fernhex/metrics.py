from typing import Optional

from prometheus_client import REGISTRY, Counter, Histogram, generate_latest, write_to_textfile

# Metrics definitions
COUNT_CALLS = Counter('fernhex_counts_total', 'Tiling counts computed', ['engine', 'run'])
COUNT_DURATION = Histogram('fernhex_count_duration_seconds', 'Time spent per count', ['engine'])
COUNT_CELLS = Histogram(
    'fernhex_count_cells', 'Region size per count', ['engine'],
    buckets=(2, 8, 32, 64, 128, 256, 512, 1024),
)
VERIFICATIONS = Counter('fernhex_verifications_total', 'Identity instances checked', ['identity', 'outcome', 'run'])
ENGINE_MISMATCHES = Counter('fernhex_engine_mismatches_total', 'Cross-check disagreements', ['run'])
CACHE_LOOKUPS = Counter('fernhex_cache_lookups_total', 'Count cache lookups', ['result', 'run'])


class MetricsCollector:
    def __init__(self, run_name: str):
        self.run_name = run_name

    def record_count(self, engine: str, cells: int, duration: float):
        COUNT_CALLS.labels(engine=engine, run=self.run_name).inc()
        COUNT_DURATION.labels(engine=engine).observe(duration)
        COUNT_CELLS.labels(engine=engine).observe(cells)

    def record_verification(self, identity: str, outcome: str):
        VERIFICATIONS.labels(identity=identity, outcome=outcome, run=self.run_name).inc()

    def record_mismatch(self):
        ENGINE_MISMATCHES.labels(run=self.run_name).inc()

    def record_cache(self, hit: bool):
        CACHE_LOOKUPS.labels(result="hit" if hit else "miss", run=self.run_name).inc()

    def get_metrics(self) -> bytes:
        return generate_latest()

    def write(self, path: str):
        write_to_textfile(path, REGISTRY)


# Global metrics instance
_metrics: Optional[MetricsCollector] = None


def init_metrics(run_name: str) -> MetricsCollector:
    global _metrics
    _metrics = MetricsCollector(run_name)
    return _metrics


def get_metrics() -> Optional[MetricsCollector]:
    return _metrics


def reset_metrics():
    global _metrics
    _metrics = None
