from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any

from qcat.arith.catmap import (
    IDENTITY,
    CatMap,
    lucas_values,
    mat_mul,
    matrix_power,
    p_seq,
    reduce_matrix,
)
from qcat.exceptions import NoOrderFound, OracleMismatch
from qcat.types import IntMatrix, Logger
from qcat.utils import debug_enabled, get_logger

#: Safety valve for `order_mod`, as a multiple of the modulus
ORDER_CEILING_FACTOR = 10


class Branch(enum.Enum):
    ODD = "odd"
    EVEN_2K = "even-2k"
    EVEN_4K = "even-4k"


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"

    def q(self, k: int) -> int:
        """Index `q` of the maximal modulus `N'_q` for the k-th member of the family."""
        match self:
            case Parity.ODD:
                return 2 * k + 1
            case Parity.EVEN:
                if k < 1:
                    raise ValueError("Even family starts at k = 1")
                return 2 * k
            case _:
                assert False


def n_prime_oracle(catmap: CatMap, q: int) -> int:
    """Largest N with `A^q = I (mod N)`: the gcd of the entries of `A^q - I`."""
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    (a, b), (c, d) = matrix_power(catmap, q)
    return math.gcd(a - 1, b, c, d - 1)


def n_prime(catmap: CatMap, q: int, *, verify: bool | None = None) -> int:
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")

    k, odd = divmod(q, 2)
    if odd:
        value = p_seq(catmap, k) + p_seq(catmap, k + 1)
    else:
        value = 2 * p_seq(catmap, k)

    if verify if verify is not None else debug_enabled():
        oracle = n_prime_oracle(catmap, q)
        if oracle != value:
            raise OracleMismatch(q, value, oracle)
    return value


def order_mod(
    catmap: CatMap,
    modulus: int,
    *,
    ceiling: int | None = None,
    logger: Logger | None = None,
) -> int:
    """`T_N`, the least t >= 1 with `A^t = I (mod N)`."""
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    ceiling = ceiling if ceiling is not None else ORDER_CEILING_FACTOR * modulus

    identity = reduce_matrix(IDENTITY, modulus)
    step = reduce_matrix(catmap.matrix, modulus)
    current = step
    t = 1
    while current != identity:
        t += 1
        if t > ceiling:
            (logger or get_logger()).bind(component="arith").warning(
                "Order search exhausted", modulus=modulus, ceiling=ceiling
            )
            raise NoOrderFound(modulus, ceiling)
        current = mat_mul(current, step, modulus)
    return t


@dataclass(frozen=True)
class QuantumPeriod:
    n: int
    branch: Branch
    order: int
    #: `A_N` defined by `A^{T_N} = I + N A_N`
    reduced: IntMatrix

    def __iter__(self) -> Any:
        # `n, branch = quantum_period(...)` unpacking
        return iter((self.n, self.branch))


def quantum_period(catmap: CatMap, modulus: int, *, ceiling: int | None = None) -> QuantumPeriod:
    order = order_mod(catmap, modulus, ceiling=ceiling)
    (a, b), (c, d) = matrix_power(catmap, order)
    entries = (a - 1, b, c, d - 1)
    assert all(x % modulus == 0 for x in entries), "A^T_N must be I mod N"
    r11, r12, r21, r22 = (x // modulus for x in entries)
    reduced = (r11, r12), (r21, r22)

    if modulus % 2 == 1:
        return QuantumPeriod(order, Branch.ODD, order, reduced)
    if r12 % 2 == 0 and r21 % 2 == 0:
        return QuantumPeriod(order, Branch.EVEN_2K, order, reduced)
    return QuantumPeriod(2 * order, Branch.EVEN_4K, order, reduced)


@dataclass(frozen=True)
class PeriodRecord:
    matrix: tuple[int, int, int, int]
    q: int
    p_values: tuple[int, ...]
    n_prime: int
    T: int
    n: int
    branch: Branch

    def to_json(self) -> dict[str, Any]:
        return {
            "matrix": list(self.matrix),
            "q": self.q,
            # decimal strings keep arbitrary precision through any JSON reader
            "p_values": [str(p) for p in self.p_values],
            "n_prime": str(self.n_prime),
            "T": self.T,
            "n": self.n,
            "branch": self.branch.value,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> PeriodRecord:
        a, b, c, d = (int(x) for x in data["matrix"])
        return cls(
            matrix=(a, b, c, d),
            q=int(data["q"]),
            p_values=tuple(int(p) for p in data["p_values"]),
            n_prime=int(data["n_prime"]),
            T=int(data["T"]),
            n=int(data["n"]),
            branch=Branch(data["branch"]),
        )


def period_record(catmap: CatMap, q: int) -> PeriodRecord:
    modulus = n_prime(catmap, q)
    period = quantum_period(catmap, modulus)
    return PeriodRecord(
        matrix=catmap.as_tuple(),
        q=q,
        p_values=lucas_values(catmap, q),
        n_prime=modulus,
        T=period.order,
        n=period.n,
        branch=period.branch,
    )


def period_table(catmap: CatMap, q_max: int) -> list[PeriodRecord]:
    if q_max < 1:
        raise ValueError(f"q_max must be positive, got {q_max}")
    return [period_record(catmap, q) for q in range(1, q_max + 1)]
