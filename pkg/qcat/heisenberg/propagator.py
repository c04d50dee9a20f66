from __future__ import annotations

from typing import Iterator

import numpy as np

from qcat.arith.catmap import CatMap
from qcat.components.clock import MonotonicClock
from qcat.exceptions import TooLarge, UnitarityFailure
from qcat.interfaces import Clock, Operator
from qcat.types import ComplexArray, Logger
from qcat.utils import MeasureElapsed, get_logger

DEFAULT_N_MAX = 8192
DEFAULT_UNITARITY_TOL = 1e-8

#: Rows of the propagator evaluated per block while building
_ROW_BLOCK = 256


def _phase_numerators(catmap: CatMap, N: int, rows: slice) -> np.ndarray:
    """
    Numerators `a s^2 + d k^2 - 2 k s` of the Gauss-sum phases over the common
    denominator `2 N |b|`, reduced into `[0, 2 N |b|)` and signed by `b`, for
    `k` in `rows`, every column `j` and every `s = r N + j` with `r < |b|`.

    The result has shape `(|b|, rows, N)`. Reduction is exact: machine integers
    when every product fits, Python integers otherwise.
    """
    b_abs = abs(catmap.b)
    denom = 2 * N * b_abs
    dtype: type = np.int64 if denom * denom < 2**62 else object

    k = np.arange(rows.start, rows.stop, dtype=dtype)[:, None] % denom
    j = np.arange(N, dtype=dtype)[None, :]
    a, d = catmap.a % denom, catmap.d % denom
    sign = 1 if catmap.b > 0 else -1

    d_term = (d * ((k * k) % denom)) % denom
    out = np.empty((b_abs, k.shape[0], N), dtype=dtype)
    for r in range(b_abs):
        s = (r * N + j) % denom
        num = (a * ((s * s) % denom)) % denom
        num = (num + d_term - (2 * ((k * s) % denom)) % denom) % denom
        out[r] = (sign * num) % denom
    return out


def _propagator_entries(catmap: CatMap, N: int) -> ComplexArray:
    b_abs = abs(catmap.b)
    denom = 2 * N * b_abs
    entries = np.empty((N, N), dtype=np.complex128)
    for start in range(0, N, _ROW_BLOCK):
        rows = slice(start, min(start + _ROW_BLOCK, N))
        frac = _phase_numerators(catmap, N, rows).astype(np.float64) / denom
        entries[rows] = np.exp(2j * np.pi * frac).sum(axis=0)
    entries /= np.sqrt(N * b_abs)
    return entries


class Propagator(Operator):
    """
    Dense quantization `M` of a cat map at Planck parameter `1 / (2 pi N)`.
    Entries are immutable once built; powers are only ever applied to vectors.
    """

    def __init__(self, catmap: CatMap, N: int, entries: ComplexArray) -> None:
        if entries.shape != (N, N):
            raise ValueError(f"Expected {N}x{N} entries, got {entries.shape}")
        entries.setflags(write=False)
        self.catmap = catmap
        self.N = N
        self._entries = entries
        self._adjoint: ComplexArray | None = None

    @property
    def dimension(self) -> int:
        return self.N

    def matrix(self) -> ComplexArray:
        return self._entries

    def adjoint_matrix(self) -> ComplexArray:
        if self._adjoint is None:
            adjoint = np.ascontiguousarray(self._entries.conj().T)
            adjoint.setflags(write=False)
            self._adjoint = adjoint
        return self._adjoint

    def apply_array(self, coords: ComplexArray) -> ComplexArray:
        return self._entries @ coords

    def apply_adjoint_array(self, coords: ComplexArray) -> ComplexArray:
        return self.adjoint_matrix() @ coords

    def power_apply_array(self, coords: ComplexArray, t: int) -> ComplexArray:
        """`M^t coords` by repeated products, `M^*` standing in for `M^{-1}` when `t < 0`."""
        step = self.apply_array if t >= 0 else self.apply_adjoint_array
        out = np.asarray(coords, dtype=np.complex128)
        for _ in range(abs(t)):
            out = step(out)
        return out

    def orbit(self, coords: ComplexArray, length: int) -> Iterator[ComplexArray]:
        """Yields `M^s coords` for `s = 0, ..., length - 1`."""
        current = np.asarray(coords, dtype=np.complex128)
        for s in range(length):
            yield current
            if s + 1 < length:
                current = self.apply_array(current)

    def unitarity_defect(self) -> float:
        gram = self.adjoint_matrix() @ self._entries
        gram[np.diag_indices_from(gram)] -= 1.0
        return float(np.max(np.abs(gram)))

    def __repr__(self) -> str:
        return f"Propagator({self.catmap}, N={self.N})"


def build_propagator(
    catmap: CatMap,
    N: int,
    *,
    n_max: int = DEFAULT_N_MAX,
    unitarity_tol: float = DEFAULT_UNITARITY_TOL,
    clock: Clock | None = None,
    logger: Logger | None = None,
) -> Propagator:
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if N > n_max:
        raise TooLarge(N, n_max)

    logger = (logger or get_logger()).bind(component="propagator", N=N, matrix=catmap.label)
    with MeasureElapsed(clock or MonotonicClock(), "Propagator build", logger=logger):
        propagator = Propagator(catmap, N, _propagator_entries(catmap, N))
        defect = propagator.unitarity_defect()

    logger.debug("Propagator built", unitarity_defect=defect)
    if not defect <= unitarity_tol:
        logger.error("Propagator failed unitarity check", defect=defect, tolerance=unitarity_tol)
        raise UnitarityFailure(defect, unitarity_tol)
    return propagator
