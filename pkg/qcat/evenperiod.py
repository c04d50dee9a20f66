"""
The even short-period family `N = N'_{2k} = 2 p_k`.

There `A^k = (a_k, N/2; N/2, a_k) (mod N)`, so `M^k` sends each basis vector onto
two coordinates half a torus apart. When the quantum period is `4k` rather than
`2k`, `M^{2k}` is a pure half-turn and projector states can vanish identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import more_itertools
import numpy as np

from qcat.arith.catmap import CatMap, matrix_power, p_seq
from qcat.arith.identities import even_branch, gcd_identity
from qcat.arith.periods import Branch, Parity, n_prime
from qcat.components.executor import InlineExecutor
from qcat.exceptions import BranchMismatch, StructureViolation
from qcat.heisenberg.checks import basis_block, sample_indices
from qcat.heisenberg.propagator import Propagator
from qcat.heisenberg.state import QuantumState
from qcat.interfaces import SweepExecutor
from qcat.states import (
    ProjectorSpec,
    normalize,
    projector_block,
    projector_spec,
    vanish_tolerance,
)
from qcat.types import Logger
from qcat.utils import get_logger

DEFAULT_STRUCTURE_TOL = 1e-6
DEFAULT_SIGMAS = (0, 1, 2, 3)
#: Below this size every j is scanned
FULL_SCAN_LIMIT = 2000
CONTROLS_NUM = 64
SCAN_CHUNK = 128


def _require_family(propagator: Propagator, k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    expected = n_prime(propagator.catmap, 2 * k)
    if propagator.N != expected:
        raise ValueError(f"Even family member k={k} lives at N={expected}, got N={propagator.N}")


def a_k(catmap: CatMap, k: int) -> int:
    (top_left, _), _ = matrix_power(catmap, k)
    return top_left


@dataclass(frozen=True)
class HalfPeriod:
    j: int
    indices: tuple[int, int]
    moduli: tuple[float, float]
    leakage: float


def half_period_check(
    propagator: Propagator,
    k: int,
    j: int,
    *,
    tol: float = DEFAULT_STRUCTURE_TOL,
) -> HalfPeriod:
    """`M^k e_j` lives on `{a_k j, a_k j + N/2}` with both moduli `1/sqrt(2)`."""
    return half_period_scan(propagator, k, [j], tol=tol)[0]


def half_period_scan(
    propagator: Propagator,
    k: int,
    js: Sequence[int],
    *,
    tol: float = DEFAULT_STRUCTURE_TOL,
) -> list[HalfPeriod]:
    _require_family(propagator, k)
    N = propagator.N
    half = N // 2
    scale = a_k(propagator.catmap, k)

    images = propagator.power_apply_array(basis_block(N, js), k)
    reports = []
    for col, j in enumerate(js):
        first = (scale * j) % N
        indices = (first, (first + half) % N)
        column = images[:, col]
        moduli = (float(abs(column[indices[0]])), float(abs(column[indices[1]])))
        rest = np.abs(column).copy()
        rest[list(indices)] = 0.0
        leakage = float(np.max(rest, initial=0.0))

        modulus_defect = max(abs(x - 1 / math.sqrt(2)) for x in moduli)
        if leakage > tol or modulus_defect > tol:
            raise StructureViolation(f"half-period support of e_{j}", max(leakage, modulus_defect))
        reports.append(HalfPeriod(j=j, indices=indices, moduli=moduli, leakage=leakage))
    return reports


def _require_quarter_branch(propagator: Propagator, k: int) -> None:
    branch = even_branch(propagator.catmap, k)
    if branch is not Branch.EVEN_4K:
        raise BranchMismatch(k, 2 * k, 4 * k)


def quarter_turn_check(
    propagator: Propagator,
    k: int,
    *,
    sample: Sequence[int] | None = None,
    tol: float = DEFAULT_STRUCTURE_TOL,
) -> dict[int, complex]:
    """
    In the 4k branch `M^{2k} e_j = eta_j e_{j + N/2}`. Returns the phases `eta_j`
    of the sampled `j`.
    """
    _require_family(propagator, k)
    _require_quarter_branch(propagator, k)

    N = propagator.N
    sample = sample if sample is not None else sample_indices(N, 16)
    images = propagator.power_apply_array(basis_block(N, sample), 2 * k)

    etas = {}
    for col, j in enumerate(sample):
        target = (j + N // 2) % N
        column = images[:, col]
        rest = np.abs(column).copy()
        rest[target] = 0.0
        leakage = max(float(np.max(rest, initial=0.0)), abs(abs(column[target]) - 1))
        if leakage > tol:
            raise StructureViolation(f"half-turn image of e_{j}", leakage)
        etas[j] = complex(column[target])
    return etas


@dataclass(frozen=True)
class HalfSum:
    vector: QuantumState
    norm_sq: float


def g_vector(propagator: Propagator, spec: ProjectorSpec) -> HalfSum:
    """`g = (I + omega^{-k} M^k) e_j` of the 2k branch; `v` is an average of `M^s g`."""
    k = spec.k
    e = basis_block(propagator.N, [spec.j])[:, 0]
    g = e + spec.omega ** (-k) * propagator.power_apply_array(e, k)
    return HalfSum(QuantumState(propagator.N, g), float(np.vdot(g, g).real))


def h_vector(propagator: Propagator, spec: ProjectorSpec) -> HalfSum:
    """`h = (I + omega^{-2k} M^{2k})(I + omega^{-k} M^k) e_j` of the 4k branch."""
    k = spec.k
    e = basis_block(propagator.N, [spec.j])[:, 0]
    first = e + spec.omega ** (-k) * propagator.power_apply_array(e, k)
    h = first + spec.omega ** (-2 * k) * propagator.power_apply_array(first, 2 * k)
    return HalfSum(QuantumState(propagator.N, h), float(np.vdot(h, h).real))


def default_threshold(k: int) -> float:
    """`(1/2) k^{-1/2}`, between the `k^{-1/2}` peaks and the spread-out floor."""
    if k < 1:
        return 0.5
    return 0.5 / math.sqrt(k)


@dataclass(frozen=True)
class SupportReport:
    support_set: tuple[int, ...]
    threshold: float
    off_support_max: float
    moduli: tuple[float, ...]
    branch: Branch

    @property
    def size(self) -> int:
        return len(self.support_set)

    @property
    def structure_ok(self) -> bool:
        """
        A 4k-branch state is built from `(I + T)(I + S) e_j`, so it keeps two or four
        large coordinates; a 2k-branch state keeps at most the three of `g`.
        """
        match self.branch:
            case Branch.EVEN_4K:
                return self.size in (2, 4)
            case Branch.EVEN_2K:
                return self.size <= 3
            case _:
                return True


def support_report(
    u: QuantumState,
    spec: ProjectorSpec,
    *,
    threshold: float | None = None,
    logger: Logger | None = None,
) -> SupportReport:
    threshold = threshold if threshold is not None else default_threshold(spec.k)
    moduli = np.abs(u.coords)
    support = np.flatnonzero(moduli > threshold)
    rest = moduli.copy()
    rest[support] = 0.0
    report = SupportReport(
        support_set=tuple(int(x) for x in support),
        threshold=threshold,
        off_support_max=float(np.max(rest, initial=0.0)),
        moduli=tuple(float(moduli[x]) for x in support),
        branch=spec.branch,
    )
    if not report.structure_ok:
        (logger or get_logger()).warning(
            "Support size breaks the branch structure",
            component="evenperiod",
            N=spec.N,
            k=spec.k,
            sigma=spec.sigma,
            branch=spec.branch.value,
            support=report.support_set,
        )
    return report


@dataclass(frozen=True)
class EvenCaseReport:
    k: int
    N: int
    branch: Branch
    t: int
    sigmas: tuple[int, ...]
    scanned_num: int
    #: sigma -> j whose projector state vanishes
    vanishing: dict[int, tuple[int, ...]]
    #: sigma -> "vanishes" | "survives" at j = 0
    sigma_outcomes: dict[int, str]
    #: surviving sigma -> support of its normalized state at j = 0
    supports: dict[int, SupportReport]
    #: gcd(a_k - 1, p_k)
    gcd: int
    n_prime_k: int
    p_k: int
    #: vanishing j outside the classes a_k j = j (mod p_k)
    stray_js: tuple[int, ...] = field(default=())

    @property
    def vanishing_js(self) -> tuple[int, ...]:
        return tuple(sorted(set().union(*self.vanishing.values())))

    @property
    def vanishing_classes(self) -> int:
        return len({j % self.p_k for j in self.vanishing_js})

    @property
    def dichotomy_holds(self) -> bool:
        """Exactly one of sigma = 0, 2 vanishes at j = 0."""
        outcomes = [self.sigma_outcomes.get(s) for s in (0, 2)]
        return outcomes.count("vanishes") == 1 and outcomes.count("survives") == 1

    @property
    def gcd_identity_holds(self) -> bool:
        return self.gcd == self.n_prime_k

    @property
    def classes_ok(self) -> bool:
        return not self.stray_js and self.vanishing_classes <= self.gcd

    @property
    def rarity_ok(self) -> bool:
        """`#vanishing j / N <= gcd(a_k - 1, p_k) / p_k`."""
        return len(self.vanishing_js) * self.p_k <= self.gcd * self.N

    @property
    def support_set(self) -> tuple[int, ...]:
        """Support of the first surviving sigma at j = 0."""
        return next((r.support_set for _, r in sorted(self.supports.items())), ())

    @property
    def support_ok(self) -> bool:
        return all(report.structure_ok for report in self.supports.values())

    def failures(self) -> list[str]:
        checks = {
            "sigma dichotomy at j=0": self.dichotomy_holds
            or not {0, 2} <= self.sigma_outcomes.keys(),
            "gcd identity": self.gcd_identity_holds,
            "vanishing classes": self.classes_ok,
            "rarity": self.rarity_ok,
            "support size": self.support_ok,
        }
        return [name for name, ok in checks.items() if not ok]

    def to_json(self) -> dict[str, object]:
        return {
            "k": self.k,
            "N": self.N,
            "branch": self.branch.value,
            "t": self.t,
            "sigmas": list(self.sigmas),
            "scanned": self.scanned_num,
            "vanishing": {str(s): list(js) for s, js in sorted(self.vanishing.items())},
            "vanishing_js": list(self.vanishing_js),
            "vanishing_classes": self.vanishing_classes,
            "sigma_outcomes_j0": {str(s): o for s, o in sorted(self.sigma_outcomes.items())},
            "support_set": list(self.support_set),
            "supports": {str(s): list(r.support_set) for s, r in sorted(self.supports.items())},
            "gcd": self.gcd,
            "n_prime_k": self.n_prime_k,
            "failures": self.failures(),
        }


def candidate_js(catmap: CatMap, k: int, N: int, *, seed: int = 0) -> tuple[int, ...]:
    """All j when `N` is small, otherwise the classes `a_k j = j (mod p_k)` plus controls."""
    if N <= FULL_SCAN_LIMIT:
        return tuple(range(N))
    p = p_seq(catmap, k)
    scale = a_k(catmap, k)
    classes = {j for j in range(N) if (scale * j - j) % p == 0}
    rng = np.random.default_rng(seed)
    controls = {int(x) for x in rng.choice(N, size=min(CONTROLS_NUM, N), replace=False)}
    return tuple(sorted(classes | controls))


def vanishing_scan(
    propagator: Propagator,
    k: int,
    js: Sequence[int] | None = None,
    sigmas: Sequence[int] = DEFAULT_SIGMAS,
    *,
    threshold: float | None = None,
    executor: SweepExecutor | None = None,
    logger: Logger | None = None,
) -> EvenCaseReport:
    _require_family(propagator, k)
    _require_quarter_branch(propagator, k)

    logger = (logger or get_logger()).bind(component="evenperiod", k=k, N=propagator.N)
    catmap, N = propagator.catmap, propagator.N
    js = tuple(js) if js is not None else candidate_js(catmap, k, N)
    spec = projector_spec(propagator, k, Parity.EVEN)
    tol = vanish_tolerance(N)
    executor = executor or InlineExecutor()

    def norms_of(chunk: tuple[int, ...]) -> np.ndarray:
        block = projector_block(propagator, spec, chunk, sigmas)
        return np.linalg.norm(block, axis=1)

    chunks = [tuple(chunk) for chunk in more_itertools.chunked(js, SCAN_CHUNK)]
    norms = np.concatenate(list(executor.map_ordered(norms_of, chunks)), axis=1)

    vanishing = {
        sigma: tuple(j for j, norm in zip(js, norms[idx]) if norm <= tol)
        for idx, sigma in enumerate(sigmas)
    }
    sigma_outcomes = {}
    supports: dict[int, SupportReport] = {}
    if 0 in js:
        col = js.index(0)
        for idx, sigma in enumerate(sigmas):
            sigma_outcomes[sigma] = "vanishes" if norms[idx, col] <= tol else "survives"
        survivors = [s for s in sigmas if sigma_outcomes[s] == "survives"]
        if survivors:
            block = projector_block(propagator, spec, [0], survivors)
            for idx, sigma in enumerate(survivors):
                u = normalize(QuantumState(N, block[idx, :, 0]))
                supports[sigma] = support_report(
                    u, spec.with_branch(sigma=sigma), threshold=threshold, logger=logger
                )

    p = p_seq(catmap, k)
    scale = a_k(catmap, k)
    identity = gcd_identity(catmap, k)
    stray = tuple(
        j for j in sorted(set().union(*vanishing.values())) if (scale * j - j) % p != 0
    )
    report = EvenCaseReport(
        k=k,
        N=N,
        branch=spec.branch,
        t=spec.t,
        sigmas=tuple(sigmas),
        scanned_num=len(js),
        vanishing=vanishing,
        sigma_outcomes=sigma_outcomes,
        supports=supports,
        gcd=identity.lhs,
        n_prime_k=identity.rhs,
        p_k=p,
        stray_js=stray,
    )
    logger.info(
        "Vanishing scan finished",
        scanned=len(js),
        vanishing=len(report.vanishing_js),
        classes=report.vanishing_classes,
        gcd=report.gcd,
        failures=report.failures(),
    )
    return report
