"""
Exact checks of the number-theoretic facts the eigenstate estimates rest on:
the gcd bound between `N'_T` and `b p_r`, orbit resonances of Fourier modes
modulo `N'_T`, and the parity facts deciding the even branch.
"""

from __future__ import annotations

import collections
import math
from dataclasses import dataclass
from typing import Iterable

import more_itertools

from qcat.arith.catmap import CatMap, matrix_power, p_seq, trace_power
from qcat.arith.periods import Branch, n_prime, quantum_period
from qcat.types import IntPair, Logger
from qcat.utils import get_logger


@dataclass(frozen=True)
class GcdBound:
    T: int
    r: int
    lhs: int
    rhs: int
    holds: bool
    #: `gcd(N'_T, p_r)` divides `N'_{gcd(T, 2r)}`
    divides: bool


def gcd_bound_check(catmap: CatMap, T: int, r: int) -> GcdBound:
    if not 1 <= r < T:
        raise ValueError(f"Need 1 <= r < T, got r={r}, T={T}")

    modulus = n_prime(catmap, T)
    p_r = p_seq(catmap, r)
    inner = n_prime(catmap, math.gcd(T, 2 * r))

    lhs = math.gcd(modulus, catmap.b * p_r)
    rhs = abs(catmap.b) * inner
    return GcdBound(
        T=T,
        r=r,
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs,
        divides=inner % math.gcd(modulus, p_r) == 0,
    )


def orbit_second_components(
    catmap: CatMap,
    m: IntPair,
    length: int,
    *,
    modulus: int | None = None,
) -> tuple[int, ...]:
    """
    `w_s = e_2 . (A^T)^s m` for `s in [0, length)`, reduced modulo `modulus` if given.
    The three-term recurrence `w_{s+2} = tr(A) w_{s+1} - w_s` is asserted along the way.
    """
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")

    def step(point: IntPair) -> IntPair:
        x, y = catmap.transpose_apply(point)
        if modulus is None:
            return x, y
        return x % modulus, y % modulus

    start = m if modulus is None else (m[0] % modulus, m[1] % modulus)
    orbit = more_itertools.take(length, more_itertools.iterate(step, start))
    values = tuple(point[1] for point in orbit)

    for w0, w1, w2 in more_itertools.sliding_window(values, 3):
        expected = catmap.trace * w1 - w0
        if modulus is not None:
            expected %= modulus
        assert w2 == expected, "orbit broke the three-term recurrence"
    return values


def resonance_set(
    catmap: CatMap,
    m: IntPair,
    c: int,
    T: int,
    *,
    modulus: int | None = None,
) -> tuple[int, ...]:
    """
    All `s in [0, T)` with `w_s = c (mod N)`. The modulus defaults to `N'_T`; the
    4k branch passes `N'_{2k}` explicitly together with `T = 4k`.
    """
    if m == (0, 0):
        raise ValueError("Resonances are defined for non-zero modes only")
    if T < 1:
        raise ValueError(f"T must be positive, got {T}")

    modulus = modulus if modulus is not None else n_prime(catmap, T)
    c %= modulus
    values = orbit_second_components(catmap, m, T, modulus=modulus)
    return tuple(s for s, w in enumerate(values) if w == c)


def resonance_count(
    catmap: CatMap,
    m: IntPair,
    c: int,
    T: int,
    *,
    modulus: int | None = None,
) -> int:
    return len(resonance_set(catmap, m, c, T, modulus=modulus))


@dataclass(frozen=True)
class ResonanceScan:
    #: Fitted constant in `max_c #{s} <= C (1 + log(1 + |m|))`
    C: float
    worst_mode: IntPair
    worst_T: int
    worst_count: int
    modes_num: int


def _modes_within(radius: int) -> Iterable[IntPair]:
    for m1 in range(-radius, radius + 1):
        for m2 in range(-radius, radius + 1):
            if (m1, m2) != (0, 0) and m1 * m1 + m2 * m2 <= radius * radius:
                yield m1, m2


def resonance_scan(
    catmap: CatMap,
    *,
    radius: int = 20,
    t_range: range = range(3, 42),
    logger: Logger | None = None,
) -> ResonanceScan:
    """
    Worst resonance multiplicity (maximised over residues `c`) for every mode with
    Euclidean norm up to `radius` and every `T` in `t_range`, normalised by
    `1 + log(1 + |m|)`. The constant is reported, not judged.
    """
    logger = (logger or get_logger()).bind(component="arith")
    moduli = {T: n_prime(catmap, T) for T in t_range}

    best = ResonanceScan(C=0.0, worst_mode=(0, 0), worst_T=0, worst_count=0, modes_num=0)
    modes_num = 0
    for m in _modes_within(radius):
        modes_num += 1
        scale = 1 + math.log(1 + math.hypot(*m))
        for T, modulus in moduli.items():
            values = orbit_second_components(catmap, m, T, modulus=modulus)
            count = max(collections.Counter(values).values())
            if count / scale > best.C:
                best = ResonanceScan(count / scale, m, T, count, 0)

    logger.info(
        "Resonance scan finished",
        radius=radius,
        modes_num=modes_num,
        C=best.C,
        worst_mode=best.worst_mode,
        worst_T=best.worst_T,
    )
    return ResonanceScan(best.C, best.worst_mode, best.worst_T, best.worst_count, modes_num)


def even_branch(catmap: CatMap, k: int) -> Branch:
    """Branch of the quantum period at `N'_{2k}`, decided exactly through `A_N`."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    branch = quantum_period(catmap, n_prime(catmap, 2 * k)).branch
    assert branch is not Branch.ODD, "N'_{2k} is even"
    return branch


@dataclass(frozen=True)
class OddityReport:
    k: int
    branch: Branch
    #: `|b| tr(A^k) / 2`
    R: int
    #: top-left entry of `A^{2k}`
    a_2k: int

    @property
    def applies(self) -> bool:
        return self.branch is Branch.EVEN_4K

    @property
    def holds(self) -> bool:
        return not self.applies or (self.R % 2 == 1 and self.a_2k % 2 == 1)


def oddity_check(catmap: CatMap, k: int) -> OddityReport:
    """In the 4k branch both `R` and `a_{2k}` are odd."""
    branch = even_branch(catmap, k)
    trace_k = trace_power(catmap, k)
    assert trace_k % 2 == 0
    (a_2k, _), _ = matrix_power(catmap, 2 * k)
    return OddityReport(k=k, branch=branch, R=abs(catmap.b) * trace_k // 2, a_2k=a_2k)


@dataclass(frozen=True)
class GcdIdentity:
    k: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def gcd_identity(catmap: CatMap, k: int) -> GcdIdentity:
    """`gcd(a_k - 1, p_k) = N'_k`."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    (a_k, _), _ = matrix_power(catmap, k)
    return GcdIdentity(k=k, lhs=math.gcd(a_k - 1, p_seq(catmap, k)), rhs=n_prime(catmap, k))
