from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

from qcat.exceptions import ConditionViolation
from qcat.types import IntMatrix, IntPair

IDENTITY: IntMatrix = ((1, 0), (0, 1))

#: Order in which the defining conditions are checked and reported
CONDITIONS = ("ad-bc=1", "ab even", "cd even", "trace even", "trace>2", "gcd(b,c)=1")


@dataclass(frozen=True)
class CatMap:
    """
    Hyperbolic toral automorphism `A = (a b; c d)` with `ad - bc = 1`, `ab, cd` even,
    even trace above 2 and `gcd(b, c) = 1`. Build through `validate_catmap`.
    """

    a: int
    b: int
    c: int
    d: int
    trace: int = field(init=False)
    lam: float = field(init=False)

    def __post_init__(self) -> None:
        trace = self.a + self.d
        object.__setattr__(self, "trace", trace)
        object.__setattr__(self, "lam", (trace + math.sqrt(trace * trace - 4)) / 2)

    @property
    def matrix(self) -> IntMatrix:
        return (self.a, self.b), (self.c, self.d)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    @property
    def label(self) -> str:
        return ",".join(str(x) for x in self.as_tuple())

    def transpose_apply(self, m: IntPair) -> IntPair:
        """`A^T m`, the classical action on Fourier modes."""
        m1, m2 = m
        return self.a * m1 + self.c * m2, self.b * m1 + self.d * m2

    def __str__(self) -> str:
        return f"A=({self.a} {self.b}; {self.c} {self.d})"


def failed_conditions(a: int, b: int, c: int, d: int) -> tuple[str, ...]:
    trace = a + d
    checks = {
        "ad-bc=1": a * d - b * c == 1,
        "ab even": (a * b) % 2 == 0,
        "cd even": (c * d) % 2 == 0,
        "trace even": trace % 2 == 0,
        "trace>2": trace > 2,
        "gcd(b,c)=1": math.gcd(b, c) == 1,
    }
    return tuple(name for name in CONDITIONS if not checks[name])


def validate_catmap(a: int, b: int, c: int, d: int) -> CatMap:
    failed = failed_conditions(a, b, c, d)
    if failed:
        raise ConditionViolation(failed[0], (a, b, c, d), failed)

    # Forced by the conditions above: an even b would make det(A) even
    assert b % 2 == 1 and c % 2 == 1, "b and c must be odd"
    assert a % 2 == 0 and d % 2 == 0, "a and d must be even"
    return CatMap(a, b, c, d)


@functools.lru_cache(maxsize=256)
def _lucas_prefix(trace: int, upto: int) -> tuple[int, ...]:
    values = [0, 1]
    while len(values) <= upto:
        values.append(trace * values[-1] - values[-2])
    return tuple(values[: upto + 1])


def lucas_values(catmap: CatMap, upto: int) -> tuple[int, ...]:
    """`p_0, ..., p_upto` with `p_{r+1} = tr(A) p_r - p_{r-1}`."""
    if upto < 0:
        raise ValueError(f"upto must be non-negative, got {upto}")
    return _lucas_prefix(catmap.trace, upto)


def p_seq(catmap: CatMap, r: int) -> int:
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    return _lucas_prefix(catmap.trace, r)[r]


def mat_mul(x: IntMatrix, y: IntMatrix, modulus: int | None = None) -> IntMatrix:
    (x11, x12), (x21, x22) = x
    (y11, y12), (y21, y22) = y
    z = (
        (x11 * y11 + x12 * y21, x11 * y12 + x12 * y22),
        (x21 * y11 + x22 * y21, x21 * y12 + x22 * y22),
    )
    if modulus is None:
        return z
    return reduce_matrix(z, modulus)


def reduce_matrix(x: IntMatrix, modulus: int) -> IntMatrix:
    (x11, x12), (x21, x22) = x
    return (x11 % modulus, x12 % modulus), (x21 % modulus, x22 % modulus)


def matrix_power(catmap: CatMap, r: int, modulus: int | None = None) -> IntMatrix:
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if modulus is not None and modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")

    result = IDENTITY if modulus is None else reduce_matrix(IDENTITY, modulus)
    base = catmap.matrix if modulus is None else reduce_matrix(catmap.matrix, modulus)
    while r:
        if r & 1:
            result = mat_mul(result, base, modulus)
        base = mat_mul(base, base, modulus)
        r >>= 1
    return result


def lucas_form(catmap: CatMap, r: int) -> IntMatrix:
    """`p_r A - p_{r-1} I`, equal to `A^r` for every `r >= 1`."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    p_r, p_prev = p_seq(catmap, r), p_seq(catmap, r - 1)
    return (
        (p_r * catmap.a - p_prev, p_r * catmap.b),
        (p_r * catmap.c, p_r * catmap.d - p_prev),
    )


def trace_power(catmap: CatMap, k: int) -> int:
    """`tr(A^k) = p_k tr(A) - 2 p_{k-1}`."""
    if k == 0:
        return 2
    return p_seq(catmap, k) * catmap.trace - 2 * p_seq(catmap, k - 1)
