from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from qcat.arith.catmap import p_seq
from qcat.heisenberg.propagator import Propagator
from qcat.heisenberg.state import FourierMode, QuantumState
from qcat.heisenberg.translations import translation, translation_phases
from qcat.types import ComplexArray, IntPair, Logger
from qcat.utils import get_logger

if TYPE_CHECKING:
    from qcat.states import ProjectorSpec


def matrix_element(u: QuantumState, m: FourierMode | IntPair) -> complex:
    """`<W(m) u, u>`."""
    return complex(np.vdot(u.coords, translation(u.N, m).apply_array(u.coords)))


def mode_coefficients(u: QuantumState, cutoff: int) -> ComplexArray:
    """
    Every `<W(m) u, u>` with `|m|_inf <= cutoff`, as a `(2c+1, 2c+1)` array indexed by
    `[m1 + c, m2 + c]`. One FFT per `m2`.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be non-negative, got {cutoff}")
    N = u.N
    size = 2 * cutoff + 1
    m1 = np.arange(-cutoff, cutoff + 1)
    out = np.empty((size, size), dtype=np.complex128)
    for col, m2 in enumerate(range(-cutoff, cutoff + 1)):
        # <W(m)u, u> = e^{-pi i m1 m2 / N} sum_j e^{2 pi i m1 j / N} u[j] conj(u[j - m2])
        products = u.coords * np.conj(np.roll(u.coords, m2))
        sums = np.fft.ifft(products) * N
        phase = np.exp(-1j * np.pi * ((m1 * m2) % (2 * N)) / N)
        out[:, col] = phase * sums[m1 % N]
    return out


def mode_bound(mode: FourierMode, t: int) -> float:
    """`(1 + log(1 + |m|)) / t`."""
    return (1 + math.log(1 + mode.norm())) / t


@dataclass(frozen=True)
class ModeEntry:
    mode: FourierMode
    value: complex
    bound: float


@dataclass(frozen=True)
class EquidistReport:
    N: int
    t: int
    cutoff: int
    dc: complex
    modes: list[ModeEntry]

    @property
    def worst_deviation(self) -> float:
        return max((abs(entry.value) for entry in self.modes), default=0.0)

    def worst_ratio(self) -> float:
        """Largest `|value| / bound` over the tabulated modes."""
        return max((abs(entry.value) / entry.bound for entry in self.modes), default=0.0)


def equidist_report(
    u: QuantumState,
    spec: ProjectorSpec,
    mode_cutoff: int,
    *,
    logger: Logger | None = None,
) -> EquidistReport:
    cutoff = min(mode_cutoff, u.N // 2)
    coeffs = mode_coefficients(u, cutoff)
    modes = []
    for m1 in range(-cutoff, cutoff + 1):
        for m2 in range(-cutoff, cutoff + 1):
            if m1 == 0 and m2 == 0:
                continue
            mode = FourierMode(m1, m2)
            value = complex(coeffs[m1 + cutoff, m2 + cutoff])
            modes.append(ModeEntry(mode, value, mode_bound(mode, spec.t)))

    report = EquidistReport(
        N=u.N, t=spec.t, cutoff=cutoff, dc=complex(coeffs[cutoff, cutoff]), modes=modes
    )
    (logger or get_logger()).bind(component="diagnostics").debug(
        "Equidistribution tabulated",
        N=u.N,
        t=spec.t,
        cutoff=cutoff,
        worst_deviation=report.worst_deviation,
    )
    return report


@dataclass(frozen=True)
class DiagonalSplit:
    mode: FourierMode
    diag: complex
    offdiag: complex
    #: `<W(m) v, v>` computed directly on the projector state
    direct: complex
    #: `s` whose diagonal term is non-zero
    support: tuple[int, ...]
    offdiag_bound: float

    @property
    def mismatch(self) -> float:
        return abs(self.diag + self.offdiag - self.direct)


def _orbit_modes(propagator: Propagator, m: FourierMode, length: int) -> list[FourierMode]:
    modes = [m]
    for _ in range(length - 1):
        modes.append(FourierMode.of(propagator.catmap.transpose_apply(modes[-1].pair)))
    return modes


def diagonal_split(
    propagator: Propagator,
    spec: ProjectorSpec,
    m: FourierMode | IntPair,
) -> DiagonalSplit:
    """
    Splits `<W(m) v, v> = (1/t^2) sum_{r,s} omega^{s-r} <W((A^T)^s m) M^{r-s} e_j, e_j>`
    into the `r = s` and `r != s` parts. Each part is evaluated through the conjugation
    identity, independently of the projector state itself.
    """
    from qcat.states import projector_state

    mode = FourierMode.of(m)
    N, t, j = propagator.N, spec.t, spec.j
    omega = spec.omega
    orbit = _orbit_modes(propagator, mode, t)

    diag = 0j
    support = []
    for s, image in enumerate(orbit):
        if image.m2 % N == 0:
            support.append(s)
            diag += translation_phases(N, image)[j]
    diag /= t * t

    # y_q = M^q e_j for -t < q < t
    start = np.zeros(N, dtype=np.complex128)
    start[j] = 1.0
    forward = list(propagator.orbit(start, t))
    backward = [start]
    for _ in range(t - 1):
        backward.append(propagator.apply_adjoint_array(backward[-1]))

    offdiag = 0j
    for s, image in enumerate(orbit):
        source = (j + image.m2) % N
        gamma = translation_phases(N, image)[source]
        for r in range(t):
            q = r - s
            if q == 0:
                continue
            y = forward[q] if q > 0 else backward[-q]
            offdiag += omega ** (-q) * gamma * y[source]
    offdiag /= t * t

    v, _ = projector_state(propagator, spec)
    b_abs = abs(propagator.catmap.b)
    worst_gauss = max(
        (math.sqrt(math.gcd(N, b_abs * p_seq(propagator.catmap, q)) / N) for q in range(1, t)),
        default=0.0,
    )
    return DiagonalSplit(
        mode=mode,
        diag=complex(diag),
        offdiag=complex(offdiag),
        direct=matrix_element(v, mode),
        support=tuple(support),
        offdiag_bound=(t - 1) / t * worst_gauss,
    )
