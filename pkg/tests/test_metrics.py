from prometheus_client import REGISTRY

from fernhex.metrics import get_metrics, init_metrics, reset_metrics


def test_collector_lifecycle():
    assert get_metrics() is None
    metrics = init_metrics("test-lifecycle")
    assert get_metrics() is metrics
    reset_metrics()
    assert get_metrics() is None


def test_verification_and_mismatch_counters():
    metrics = init_metrics("test-counters")
    metrics.record_verification("macmahon", "pass")
    metrics.record_verification("macmahon", "pass")
    metrics.record_mismatch()
    assert REGISTRY.get_sample_value(
        "fernhex_verifications_total",
        {"identity": "macmahon", "outcome": "pass", "run": "test-counters"},
    ) == 2
    assert REGISTRY.get_sample_value("fernhex_engine_mismatches_total", {"run": "test-counters"}) == 1


def test_write_textfile(tmp_path):
    metrics = init_metrics("test-write")
    metrics.record_count("kasteleyn", 12, 0.01)
    path = tmp_path / "metrics.prom"
    metrics.write(str(path))
    text = path.read_text()
    assert 'fernhex_counts_total{engine="kasteleyn",run="test-write"} 1.0' in text
    assert b"fernhex_count_cells" in metrics.get_metrics()
