from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from qcat.diagnostics.equidist import mode_coefficients
from qcat.heisenberg.state import QuantumState
from qcat.types import RealArray

DEFAULT_GRID = 256
#: Gaussian weight beyond this many widths is below e^{-4.5}
CUTOFF_WIDTHS = 3
PGM_FLOOR = 1e-6


def default_smoothing(N: int) -> float:
    return math.sqrt(N) / 8


def default_cutoff(N: int, smoothing: float | None = None) -> int:
    smoothing = smoothing if smoothing is not None else default_smoothing(N)
    return min(math.ceil(CUTOFF_WIDTHS * smoothing), N // 2)


@dataclass(frozen=True)
class WignerGrid:
    """Smoothed Wigner density on the `G x G` grid `(x, xi) = (a/G, b/G)`, indexed `[a, b]`."""

    resolution: int
    smoothing: float
    cutoff: int
    values: RealArray = field(repr=False)
    #: largest imaginary part dropped when taking the real grid
    imag_residual: float = 0.0

    def mean(self) -> float:
        return float(np.mean(self.values))

    def relative_sup_deviation(self) -> float:
        mean = self.mean()
        return float(np.max(np.abs(self.values - mean)) / abs(mean))

    def to_pgm(
        self,
        fp: IO[bytes],
        *,
        floor: float = PGM_FLOOR,
        comments: Sequence[str] = (),
    ) -> None:
        """8-bit binary PGM on a logarithmic grey scale, `xi` increasing upwards."""
        logs = np.log10(np.maximum(self.values, floor))
        lo, hi = float(logs.min()), float(logs.max())
        if hi - lo > 0:
            scaled = (logs - lo) / (hi - lo) * 255
        else:
            scaled = np.full_like(logs, 255.0)
        pixels = np.flipud(np.rint(scaled).astype(np.uint8).T)

        header = ["P5"] + [f"# {line}" for line in comments]
        header += [f"{self.resolution} {self.resolution}", "255"]
        fp.write(("\n".join(header) + "\n").encode("ascii"))
        fp.write(np.ascontiguousarray(pixels).tobytes())


def smoothed_wigner(
    u: QuantumState,
    G: int = DEFAULT_GRID,
    s: float | None = None,
    cutoff: int | None = None,
) -> WignerGrid:
    """
    `sum_{|m|_inf <= cutoff} <W(m)u, u> exp(-|m|^2 / 2 s^2) exp(-2 pi i m.(x, xi))`,
    evaluated separably in `x` and `xi`.
    """
    if G < 1:
        raise ValueError(f"Grid size must be positive, got {G}")
    s = s if s is not None else default_smoothing(u.N)
    cutoff = cutoff if cutoff is not None else default_cutoff(u.N, s)
    if not 0 <= cutoff <= u.N // 2:
        raise ValueError(f"cutoff must lie in [0, {u.N // 2}], got {cutoff}")
    if G <= 2 * cutoff:
        raise ValueError(f"Grid size {G} aliases modes up to {cutoff}, need G > {2 * cutoff}")
    if s <= 0:
        raise ValueError(f"Smoothing width must be positive, got {s}")

    ms = np.arange(-cutoff, cutoff + 1)
    weights = np.exp(-(ms[:, None] ** 2 + ms[None, :] ** 2) / (2 * s * s))
    coeffs = mode_coefficients(u, cutoff) * weights

    # e^{-2 pi i m a / G}
    waves = np.exp(-2j * np.pi * np.outer(np.arange(G), ms) / G)
    grid = waves @ coeffs @ waves.T
    return WignerGrid(
        resolution=G,
        smoothing=s,
        cutoff=cutoff,
        values=np.ascontiguousarray(grid.real),
        imag_residual=float(np.max(np.abs(grid.imag))),
    )


@dataclass(frozen=True)
class ScarContrast:
    state: WignerGrid
    basis: WignerGrid

    @property
    def flatter(self) -> bool:
        return self.state.relative_sup_deviation() < self.basis.relative_sup_deviation()


def scar_contrast(
    u: QuantumState,
    j: int = 0,
    G: int = DEFAULT_GRID,
    s: float | None = None,
    cutoff: int | None = None,
) -> ScarContrast:
    """Smoothed Wigner grids of `u` and of the localized basis state `e_j`, same parameters."""
    state = smoothed_wigner(u, G, s, cutoff)
    basis = smoothed_wigner(QuantumState.basis(u.N, j), G, state.smoothing, state.cutoff)
    return ScarContrast(state=state, basis=basis)
