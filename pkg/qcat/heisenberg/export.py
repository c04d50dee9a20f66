from __future__ import annotations

import enum
import json
from typing import IO, Any, Mapping

import numpy as np

from qcat.heisenberg.propagator import Propagator

FORMAT_VERSION = 1


class MatrixFormat(enum.Enum):
    BINARY = "binary"
    CSV = "csv"


def header_lines(fields: Mapping[str, Any]) -> list[str]:
    """`# key=value` lines in insertion order."""
    return [f"# {key}={value}" for key, value in fields.items()]


def export_matrix(
    propagator: Propagator,
    fp: IO[bytes],
    fmt: MatrixFormat = MatrixFormat.BINARY,
    *,
    extra: Mapping[str, Any] | None = None,
) -> None:
    """
    Column-major dump of the propagator entries.

    Binary: one JSON header line, then `N*N` (re, im) pairs as little-endian 8-byte floats.
    CSV: `# key=value` header, then `row,col,re,im` per entry.
    """
    header: dict[str, Any] = {
        "matrix": propagator.catmap.label,
        "N": propagator.N,
        "format-version": FORMAT_VERSION,
        "layout": "column-major",
    }
    header.update(extra or {})

    # column-major: Fortran order of the (row, col) array
    entries = propagator.matrix().ravel(order="F")
    match fmt:
        case MatrixFormat.BINARY:
            fp.write((json.dumps(header, sort_keys=True) + "\n").encode())
            pairs = np.empty(2 * entries.size, dtype="<f8")
            pairs[0::2] = entries.real
            pairs[1::2] = entries.imag
            fp.write(pairs.tobytes())
        case MatrixFormat.CSV:
            lines = header_lines(header) + ["row,col,re,im"]
            N = propagator.N
            for idx, value in enumerate(entries):
                col, row = divmod(idx, N)
                lines.append(f"{row},{col},{value.real:.17g},{value.imag:.17g}")
            fp.write(("\n".join(lines) + "\n").encode())
        case _:
            raise ValueError(f"Unknown format {fmt}")


def read_binary_matrix(fp: IO[bytes]) -> tuple[dict[str, Any], np.ndarray]:
    header = json.loads(fp.readline())
    N = int(header["N"])
    pairs = np.frombuffer(fp.read(), dtype="<f8")
    if pairs.size != 2 * N * N:
        raise ValueError(f"Expected {2 * N * N} floats, got {pairs.size}")
    entries = (pairs[0::2] + 1j * pairs[1::2]).reshape((N, N), order="F")
    return header, entries
