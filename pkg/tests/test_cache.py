import json

from prometheus_client import REGISTRY

from fernhex.cache import CountCache
from fernhex.metrics import init_metrics
from fernhex.regions import hexagon

UNIT = hexagon((1, 1, 1, 1, 1, 1))


def test_get_and_put():
    cache = CountCache()
    assert cache.get(UNIT, "dp") is None
    cache.put(UNIT, "dp", 2)
    assert cache.get(UNIT, "dp") == 2
    assert cache.get(UNIT, "kasteleyn") is None
    assert cache.get_stats() == {"entries": 1, "hits": 1, "misses": 2}


def test_memory_cache_does_not_touch_disk(tmp_path):
    cache = CountCache(str(tmp_path), persist=False)
    cache.put(UNIT, "dp", 2)
    cache.flush()
    assert list(tmp_path.iterdir()) == []


def test_persisted_counts_survive_reload(tmp_path):
    big = 10 ** 40 + 7
    cache = CountCache(str(tmp_path), persist=True)
    cache.put(UNIT, "dp", big)
    cache.flush()
    stored = json.loads((tmp_path / CountCache.FILE_NAME).read_text())
    assert list(stored["counts"].values()) == [str(big)]
    assert CountCache(str(tmp_path), persist=True).get(UNIT, "dp") == big


def test_unreadable_cache_file_is_ignored(tmp_path):
    (tmp_path / CountCache.FILE_NAME).write_text("{broken")
    cache = CountCache(str(tmp_path), persist=True)
    assert cache.get_stats()["entries"] == 0


def test_lookups_are_counted():
    init_metrics("test-cache")
    cache = CountCache()
    cache.get(UNIT, "dp")
    cache.put(UNIT, "dp", 2)
    cache.get(UNIT, "dp")
    for result in ("hit", "miss"):
        assert REGISTRY.get_sample_value(
            "fernhex_cache_lookups_total", {"result": result, "run": "test-cache"}
        ) == 1
