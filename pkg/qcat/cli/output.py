from __future__ import annotations

import contextlib
import csv
import json
import pathlib
import sys
from typing import IO, Any, Iterable, Iterator, Mapping, Sequence

from qcat.heisenberg.export import header_lines


def fmt_float(value: float) -> str:
    """Shortest round-tripping representation, stable across runs."""
    return repr(float(value))


@contextlib.contextmanager
def open_text(path: pathlib.Path | None) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fp:
        yield fp


@contextlib.contextmanager
def open_binary(path: pathlib.Path | None) -> Iterator[IO[bytes]]:
    if path is None:
        yield sys.stdout.buffer
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fp:
        yield fp


def write_csv(
    fp: IO[str],
    header: Mapping[str, Any],
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> None:
    for line in header_lines(header):
        fp.write(line + "\n")
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt_float(x) if isinstance(x, float) else x for x in row])


def write_json(fp: IO[str], header: Mapping[str, Any], payload: Mapping[str, Any]) -> None:
    json.dump({"header": dict(header), **payload}, fp, indent=2, sort_keys=True, default=str)
    fp.write("\n")


def complex_columns(value: complex) -> tuple[float, float, float]:
    return float(value.real), float(value.imag), abs(value)
