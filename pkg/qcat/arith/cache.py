from __future__ import annotations

import json
import os
import pathlib
import threading

from qcat.arith.catmap import CatMap
from qcat.arith.periods import PeriodRecord, period_record
from qcat.types import Logger
from qcat.utils import get_logger

CACHE_ENV = "QCAT_CACHE"

_Key = tuple[tuple[int, int, int, int], int]


class PeriodCache:
    """
    Advisory JSON-lines store of `PeriodRecord`s keyed by `(A, q)`. Every record is
    re-derivable, so unreadable lines are skipped rather than trusted.
    """

    def __init__(self, path: pathlib.Path | str, *, logger: Logger | None = None) -> None:
        self._path = pathlib.Path(path)
        self._logger = (logger or get_logger()).bind(component="arith", cache=str(self._path))
        self._records: dict[_Key, PeriodRecord] | None = None
        self._lock = threading.Lock()

    @classmethod
    def from_env(cls, *, logger: Logger | None = None) -> PeriodCache | None:
        path = os.environ.get(CACHE_ENV)
        if not path:
            return None
        return cls(path, logger=logger)

    @property
    def path(self) -> pathlib.Path:
        return self._path

    def _load(self) -> dict[_Key, PeriodRecord]:
        if self._records is not None:
            return self._records

        records: dict[_Key, PeriodRecord] = {}
        if self._path.exists():
            with self._path.open("r", encoding="utf-8") as fp:
                for lineno, line in enumerate(fp, 1):
                    if not line.strip():
                        continue
                    try:
                        record = PeriodRecord.from_json(json.loads(line))
                    except (ValueError, KeyError, TypeError) as exc:
                        self._logger.warning(
                            "Skipping bad cache line", lineno=lineno, reason=str(exc)
                        )
                        continue
                    records[record.matrix, record.q] = record
        self._logger.debug("Cache loaded", records_num=len(records))
        self._records = records
        return records

    def get(self, catmap: CatMap, q: int) -> PeriodRecord | None:
        with self._lock:
            return self._load().get((catmap.as_tuple(), q))

    def put(self, record: PeriodRecord) -> None:
        with self._lock:
            records = self._load()
            key = record.matrix, record.q
            if key in records:
                return
            records[key] = record
            self._path.parent.mkdir(parents=True, exist_ok=True)
            with self._path.open("a", encoding="utf-8") as fp:
                fp.write(json.dumps(record.to_json(), sort_keys=True) + "\n")

    def record(self, catmap: CatMap, q: int) -> PeriodRecord:
        cached = self.get(catmap, q)
        if cached is not None:
            return cached
        fresh = period_record(catmap, q)
        self.put(fresh)
        return fresh

    def __len__(self) -> int:
        with self._lock:
            return len(self._load())
