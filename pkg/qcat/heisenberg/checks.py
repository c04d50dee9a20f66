from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from qcat.arith.catmap import p_seq
from qcat.exceptions import InvariantFailure
from qcat.heisenberg.propagator import Propagator
from qcat.heisenberg.state import FourierMode
from qcat.heisenberg.translations import translation
from qcat.types import ComplexArray, IntPair, Logger
from qcat.utils import get_logger

DEFAULT_EGOROV_TOL = 1e-8
DEFAULT_SAMPLE_SIZE = 32
DEFAULT_SCALAR_TOL = 1e-6
GAUSS_SLACK = 1e-9


def sample_indices(N: int, size: int = DEFAULT_SAMPLE_SIZE) -> tuple[int, ...]:
    """Evenly spread basis indices, all of them when `N <= size`."""
    if N <= size:
        return tuple(range(N))
    return tuple(sorted({int(x) for x in np.linspace(0, N - 1, size).round()}))


def basis_block(N: int, sample: Sequence[int]) -> ComplexArray:
    block = np.zeros((N, len(sample)), dtype=np.complex128)
    block[list(sample), np.arange(len(sample))] = 1.0
    return block


@dataclass(frozen=True)
class ScalarTest:
    #: largest coordinate outside the sampled index, or modulus defect on it
    leakage: float
    #: largest deviation of the per-index phase from the common one
    spread: float
    phi: float

    def passed(self, tol: float = DEFAULT_SCALAR_TOL) -> bool:
        return self.leakage <= tol and self.spread <= tol


def scalar_test(images: ComplexArray, sample: Sequence[int]) -> ScalarTest:
    """Whether the columns `images[:, i]` all equal one `e^{i phi} e_{sample[i]}`."""
    cols = np.arange(len(sample))
    diag = images[list(sample), cols]

    residual = images.copy()
    residual[list(sample), cols] = 0.0
    leakage = max(
        float(np.max(np.abs(residual), initial=0.0)),
        float(np.max(np.abs(np.abs(diag) - 1))),
    )

    reference = diag[0] / abs(diag[0]) if abs(diag[0]) > 0 else 1.0
    spread = float(np.max(np.abs(diag / reference - 1)))
    phi = float(np.angle(reference)) % (2 * math.pi)
    return ScalarTest(leakage=leakage, spread=spread, phi=phi)


def numerical_period(
    propagator: Propagator,
    *,
    sample: Sequence[int] | None = None,
    max_t: int | None = None,
    tol: float = DEFAULT_SCALAR_TOL,
) -> int | None:
    """Least `t <= max_t` with `M^t` acting as one scalar on the sampled basis vectors."""
    N = propagator.N
    sample = sample if sample is not None else sample_indices(N)
    max_t = max_t if max_t is not None else 6 * N

    images = basis_block(N, sample)
    for t in range(1, max_t + 1):
        images = propagator.apply_array(images)
        if scalar_test(images, sample).passed(tol):
            return t
    return None


def egorov_defect(propagator: Propagator, m: FourierMode | IntPair) -> float:
    """`max |M^* W(m) M - W(A^T m)|`."""
    mode = FourierMode.of(m)
    N = propagator.N
    shifted = translation(N, mode).apply_array(propagator.matrix())
    conjugated = propagator.adjoint_matrix() @ shifted
    image = translation(N, propagator.catmap.transpose_apply(mode.pair)).matrix()
    return float(np.max(np.abs(conjugated - image)))


def egorov_sweep(
    propagator: Propagator,
    *,
    radius: int = 5,
    tol: float = DEFAULT_EGOROV_TOL,
    logger: Logger | None = None,
) -> float:
    """Worst `egorov_defect` over `|m|_inf <= radius`."""
    logger = (logger or get_logger()).bind(component="propagator", N=propagator.N)
    worst, worst_mode = 0.0, (0, 0)
    for m1 in range(-radius, radius + 1):
        for m2 in range(-radius, radius + 1):
            defect = egorov_defect(propagator, (m1, m2))
            if defect > worst:
                worst, worst_mode = defect, (m1, m2)
    if worst > tol:
        logger.warning("Egorov defect above tolerance", defect=worst, mode=worst_mode, tol=tol)
    else:
        logger.debug("Egorov sweep passed", defect=worst, mode=worst_mode)
    return worst


def dispersive_bound(propagator: Propagator, r: int) -> float:
    """`sqrt(gcd(N, |b| p_|r|) / N)`."""
    if r == 0:
        raise ValueError("r must be non-zero")
    N = propagator.N
    return math.sqrt(math.gcd(N, abs(propagator.catmap.b) * p_seq(propagator.catmap, abs(r))) / N)


@dataclass(frozen=True)
class GaussBound:
    r: int
    value: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.value <= self.bound + GAUSS_SLACK


def gauss_bound_report(
    propagator: Propagator,
    r: int,
    m: FourierMode | IntPair,
    j: int,
    ell: int,
) -> GaussBound:
    """`|<W(m) M^r e_j, e_ell>|` against the dispersive bound."""
    N = propagator.N
    if not (0 <= j < N and 0 <= ell < N):
        raise ValueError(f"Indices must lie in [0, {N}), got j={j}, ell={ell}")

    start = np.zeros(N, dtype=np.complex128)
    start[j] = 1.0
    image = translation(N, m).apply_array(propagator.power_apply_array(start, r))
    report = GaussBound(r=r, value=float(abs(image[ell])), bound=dispersive_bound(propagator, r))
    if not report.holds:
        failed = f"dispersive bound at r={r}: {report.value:.6g} > {report.bound:.6g}"
        raise InvariantFailure([failed])
    return report


def gauss_bound_scan(
    propagator: Propagator,
    rs: Iterable[int],
    modes: Iterable[FourierMode | IntPair] = ((0, 0),),
    *,
    diagonal: bool = True,
) -> list[GaussBound]:
    """
    Worst value of `|<W(m) M^r e_j, e_l>|` over every `j` (with `l = j` when
    `diagonal`, every `l` otherwise), one report per `(r, m)`.
    """
    N = propagator.N
    identity = np.eye(N, dtype=np.complex128)
    modes = [FourierMode.of(m) for m in modes]
    reports = []
    for r in rs:
        powered = propagator.power_apply_array(identity, r)
        bound = dispersive_bound(propagator, r)
        for mode in modes:
            values = np.abs(translation(N, mode).apply_array(powered))
            value = float(np.max(np.diag(values) if diagonal else values))
            reports.append(GaussBound(r=r, value=value, bound=bound))
    return reports
