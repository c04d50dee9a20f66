import json

import pytest

from qcat.arith import PeriodCache, period_record
from qcat.arith.cache import CACHE_ENV


@pytest.fixture
def cache_path(tmp_path):
    return tmp_path / "cache" / "periods.jsonl"


class TestPeriodCache:
    def test_miss_computes_and_appends(self, catmap, cache_path):
        cache = PeriodCache(cache_path)

        assert cache.get(catmap, 11) is None
        record = cache.record(catmap, 11)

        assert record == period_record(catmap, 11)
        assert len(cache_path.read_text().splitlines()) == 1
        assert len(cache) == 1

    def test_hit_survives_reload(self, catmap, cache_path):
        PeriodCache(cache_path).record(catmap, 12)

        reloaded = PeriodCache(cache_path)
        assert reloaded.get(catmap, 12) == period_record(catmap, 12)

    def test_put_is_idempotent(self, catmap, cache_path):
        cache = PeriodCache(cache_path)
        record = period_record(catmap, 5)

        cache.put(record)
        cache.put(record)

        assert len(cache_path.read_text().splitlines()) == 1

    def test_big_integers_are_strings(self, catmap, cache_path):
        PeriodCache(cache_path).record(catmap, 60)

        line = json.loads(cache_path.read_text())
        assert isinstance(line["n_prime"], str)
        assert int(line["n_prime"]) == period_record(catmap, 60).n_prime

    def test_bad_lines_are_skipped(self, catmap, cache_path, log_records):
        cache_path.parent.mkdir(parents=True)
        good = json.dumps(period_record(catmap, 3).to_json())
        cache_path.write_text("not json\n\n" + good + "\n" + '{"q": 1}\n')

        cache = PeriodCache(cache_path)

        assert len(cache) == 1
        assert cache.get(catmap, 3) is not None
        skipped = [r for r in log_records if r["message"] == "Skipping bad cache line"]
        assert [r["extra"]["lineno"] for r in skipped] == [1, 4]

    def test_from_env(self, monkeypatch, cache_path):
        monkeypatch.delenv(CACHE_ENV, raising=False)
        assert PeriodCache.from_env() is None

        monkeypatch.setenv(CACHE_ENV, str(cache_path))
        cache = PeriodCache.from_env()
        assert cache is not None and cache.path == cache_path
