"""
Short-period projector eigenstates

    v = (1/t) sum_{s<t} omega^{-s} M^s e_j,    omega = exp(i (phi + 2 pi sigma) / t),

where `t` is the quantum period at `N` and `M^t = e^{i phi} I`. Every non-zero `v`
is an eigenvector of `M` with eigenvalue `omega`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from qcat.arith.catmap import CatMap
from qcat.arith.periods import Branch, Parity, n_prime, quantum_period
from qcat.components.executor import InlineExecutor
from qcat.diagnostics.fitting import RateFit, rate_fit
from qcat.exceptions import Degenerate, NotScalar, VanishingState
from qcat.heisenberg.checks import (
    DEFAULT_SCALAR_TOL,
    basis_block,
    sample_indices,
    scalar_test,
)
from qcat.heisenberg.propagator import DEFAULT_N_MAX, Propagator, build_propagator
from qcat.heisenberg.state import QuantumState
from qcat.interfaces import SweepExecutor
from qcat.types import ComplexArray, Logger, RealArray
from qcat.utils import get_logger

VANISH_SCALE = 1e-10
PEAK_REL_TOL = 0.1


def vanish_tolerance(N: int) -> float:
    return VANISH_SCALE * math.sqrt(N)


@dataclass(frozen=True)
class ProjectorSpec:
    N: int
    k: int
    parity: Parity
    j: int
    sigma: int
    t: int
    phi: float
    branch: Branch

    @property
    def omega(self) -> complex:
        return cmath.exp(1j * (self.phi + 2 * math.pi * self.sigma) / self.t)

    def with_branch(self, *, j: int | None = None, sigma: int | None = None) -> ProjectorSpec:
        return ProjectorSpec(
            N=self.N,
            k=self.k,
            parity=self.parity,
            j=self.j if j is None else j % self.N,
            sigma=self.sigma if sigma is None else sigma,
            t=self.t,
            phi=self.phi,
            branch=self.branch,
        )


def scalar_phase(
    propagator: Propagator,
    t: int,
    *,
    sample: Sequence[int] | None = None,
    tol: float = DEFAULT_SCALAR_TOL,
    logger: Logger | None = None,
) -> float:
    """`phi in [0, 2 pi)` with `M^t e_j = e^{i phi} e_j` on every sampled `j`."""
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    N = propagator.N
    sample = sample if sample is not None else sample_indices(N)

    images = propagator.power_apply_array(basis_block(N, sample), t)
    test = scalar_test(images, sample)
    if not test.passed(tol):
        (logger or get_logger()).bind(component="states").debug(
            "Power is not scalar", N=N, t=t, leakage=test.leakage, spread=test.spread
        )
        raise NotScalar(t, test.leakage, test.spread)
    return test.phi


def projector_spec(
    propagator: Propagator,
    k: int,
    parity: Parity | str = Parity.ODD,
    j: int = 0,
    sigma: int = 0,
    *,
    sample: Sequence[int] | None = None,
) -> ProjectorSpec:
    parity = Parity(parity)
    catmap, N = propagator.catmap, propagator.N
    expected = n_prime(catmap, parity.q(k))
    if N != expected:
        raise ValueError(f"Family member k={k} ({parity.value}) lives at N={expected}, got N={N}")
    if not 0 <= j < N:
        raise ValueError(f"j must lie in [0, {N}), got {j}")

    period = quantum_period(catmap, N)
    if parity is Parity.ODD:
        assert period.n == 2 * k + 1, "odd family has period 2k+1"
    phi = scalar_phase(propagator, period.n, sample=sample)
    return ProjectorSpec(
        N=N, k=k, parity=parity, j=j, sigma=sigma, t=period.n, phi=phi, branch=period.branch
    )


def omega_weights(spec: ProjectorSpec, sigma: int | None = None) -> ComplexArray:
    """`omega^{-s} / t` for `s < t`, phases evaluated directly from `s`."""
    sigma = spec.sigma if sigma is None else sigma
    s = np.arange(spec.t)
    return np.exp(-1j * (spec.phi + 2 * np.pi * sigma) * s / spec.t) / spec.t


def projector_block(
    propagator: Propagator,
    spec: ProjectorSpec,
    js: Sequence[int],
    sigmas: Sequence[int],
) -> ComplexArray:
    """
    Projector states for every `(sigma, j)` pair, sharing the powers `M^s e_j`.
    Shape `(len(sigmas), N, len(js))`.
    """
    weights = [omega_weights(spec, sigma) for sigma in sigmas]
    out = np.zeros((len(sigmas), propagator.N, len(js)), dtype=np.complex128)
    for s, images in enumerate(propagator.orbit(basis_block(propagator.N, js), spec.t)):
        for idx, w in enumerate(weights):
            out[idx] += w[s] * images
    return out


def projector_state(propagator: Propagator, spec: ProjectorSpec) -> tuple[QuantumState, float]:
    v = projector_block(propagator, spec, [spec.j], [spec.sigma])[0, :, 0]
    return QuantumState(propagator.N, v), float(np.linalg.norm(v))


def normalize(v: QuantumState, vanish_tol: float | None = None) -> QuantumState:
    tol = vanish_tol if vanish_tol is not None else vanish_tolerance(v.N)
    norm = v.norm()
    if not norm > tol:
        raise VanishingState(norm, tol)
    return v.scaled(1 / norm)


def eigen_residual(propagator: Propagator, u: QuantumState, omega: complex) -> float:
    """`|M u - omega u|_2`."""
    return float(np.linalg.norm(propagator.apply_array(u.coords) - omega * u.coords))


@dataclass(frozen=True)
class ProfileReport:
    j: int
    t: int
    peak_index: int
    peak_value: complex
    off_peak_max: float
    linf: float
    l2: float
    predicted_peak: float
    moduli: RealArray = field(compare=False, repr=False)

    @property
    def peak_at_j(self) -> bool:
        return self.peak_index == self.j

    @property
    def peak_error(self) -> float:
        """Relative deviation of `|u(j)|` from `1/sqrt(t)`."""
        return abs(abs(self.peak_value) - self.predicted_peak) / self.predicted_peak

    @property
    def off_peak_ok(self) -> bool:
        return self.off_peak_max <= abs(self.peak_value) / 2

    def passed(self, peak_tol: float = PEAK_REL_TOL) -> bool:
        return self.peak_at_j and self.peak_error <= peak_tol and self.off_peak_ok


def coordinate_profile(u: QuantumState, spec: ProjectorSpec) -> ProfileReport:
    moduli = np.abs(u.coords)
    peak_index = int(np.argmax(moduli))
    rest = np.delete(moduli, peak_index)
    return ProfileReport(
        j=spec.j,
        t=spec.t,
        peak_index=peak_index,
        peak_value=complex(u.coords[peak_index]),
        off_peak_max=float(np.max(rest, initial=0.0)),
        linf=float(moduli[peak_index]),
        l2=float(np.linalg.norm(moduli)),
        predicted_peak=1 / math.sqrt(spec.t),
        moduli=moduli,
    )


@dataclass(frozen=True)
class LawPoint:
    k: int
    N: int
    t: int
    #: worst `|t |v|^2 - 1|` over the j sample
    norm_deviation: float
    #: worst `| |u(j)| - 1/sqrt(t) |` over the j sample
    peak_deviation: float
    #: worst off-peak coordinate of the normalised states
    off_peak_max: float


@dataclass(frozen=True)
class LawScan:
    points: list[LawPoint]
    fit: RateFit | None


def family_propagator(
    catmap: CatMap,
    k: int,
    parity: Parity | str = Parity.ODD,
    *,
    n_max: int = DEFAULT_N_MAX,
) -> Propagator:
    return build_propagator(catmap, n_prime(catmap, Parity(parity).q(k)), n_max=n_max)


def law_point(
    catmap: CatMap,
    k: int,
    *,
    parity: Parity = Parity.ODD,
    sample_size: int = 16,
    sigma: int = 0,
    n_max: int = DEFAULT_N_MAX,
) -> LawPoint:
    propagator = family_propagator(catmap, k, parity, n_max=n_max)
    spec = projector_spec(propagator, k, parity, sigma=sigma)
    js = sample_indices(spec.N, sample_size)
    block = projector_block(propagator, spec, js, [sigma])[0]

    norms = np.linalg.norm(block, axis=0)
    alive = norms > vanish_tolerance(spec.N)
    units = block[:, alive] / norms[alive]
    moduli = np.abs(units)
    cols = np.arange(units.shape[1])
    rows = np.asarray(js)[alive]
    moduli[rows, cols] = 0.0

    return LawPoint(
        k=k,
        N=spec.N,
        t=spec.t,
        norm_deviation=float(np.max(np.abs(spec.t * norms**2 - 1))),
        peak_deviation=float(np.max(np.abs(norms - 1 / math.sqrt(spec.t)))),
        off_peak_max=float(np.max(moduli, initial=0.0)),
    )


def _law_scan(
    catmap: CatMap,
    ks: Sequence[int],
    which: str,
    *,
    parity: Parity,
    sample_size: int,
    n_max: int,
    executor: SweepExecutor | None,
    logger: Logger | None,
) -> LawScan:
    logger = (logger or get_logger()).bind(component="states", law=which)
    executor = executor or InlineExecutor()
    points = list(
        executor.map_ordered(
            lambda k: law_point(
                catmap, k, parity=parity, sample_size=sample_size, n_max=n_max
            ),
            ks,
        )
    )
    for point in points:
        logger.info("Law point", k=point.k, N=point.N, t=point.t, deviation=getattr(point, which))

    fit = None
    if len(points) >= 3:
        if which == "peak_deviation":
            data = [(p.N, p.peak_deviation / math.sqrt(p.t)) for p in points]
        else:
            data = [(p.N, p.norm_deviation) for p in points]
        try:
            fit = rate_fit(data)
        except Degenerate as exc:
            logger.opt(exception=exc).warning("Rate fit skipped")
        else:
            logger.info("Rate fitted", c=fit.c, C=fit.C, quality=fit.quality)
    return LawScan(points=points, fit=fit)


def norm_law_scan(
    catmap: CatMap,
    ks: Sequence[int],
    *,
    parity: Parity = Parity.ODD,
    sample_size: int = 16,
    n_max: int = DEFAULT_N_MAX,
    executor: SweepExecutor | None = None,
    logger: Logger | None = None,
) -> LawScan:
    """`t |v|^2 -> 1` along the family."""
    return _law_scan(
        catmap,
        ks,
        "norm_deviation",
        parity=parity,
        sample_size=sample_size,
        n_max=n_max,
        executor=executor,
        logger=logger,
    )


def peak_law_scan(
    catmap: CatMap,
    ks: Sequence[int],
    *,
    parity: Parity = Parity.ODD,
    sample_size: int = 16,
    n_max: int = DEFAULT_N_MAX,
    executor: SweepExecutor | None = None,
    logger: Logger | None = None,
) -> LawScan:
    """`|u(j)| -> 1/sqrt(t)` along the family, exponent fitted on `dev / sqrt(t)` against N."""
    return _law_scan(
        catmap,
        ks,
        "peak_deviation",
        parity=parity,
        sample_size=sample_size,
        n_max=n_max,
        executor=executor,
        logger=logger,
    )
