from __future__ import annotations

import cmath
from typing import Mapping

import numpy as np

from qcat.heisenberg.state import FourierMode, QuantumState
from qcat.interfaces import Operator
from qcat.types import ComplexArray, IntPair

_ModeLike = FourierMode | IntPair


def translation_phases(N: int, m: FourierMode) -> ComplexArray:
    """
    `gamma_{N,m,j} = exp(pi i (2 m1 j - m1 m2) / N)` for every `j`, with the integer
    numerator reduced modulo `2N` before exponentiation.
    """
    j = np.arange(N, dtype=np.int64)
    num = (2 * (m.m1 % N) * j - (m.m1 % (2 * N)) * (m.m2 % (2 * N))) % (2 * N)
    return np.exp(1j * np.pi * num / N)


class Translation(Operator):
    """Quantum translation `W_N(m)`: `e_j -> gamma_{N,m,j} e_{(j - m2) mod N}`."""

    def __init__(self, N: int, mode: FourierMode) -> None:
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        self.N = N
        self.mode = mode
        self._phases = translation_phases(N, mode)
        # (W u)[i] = gamma_{i + m2} u[i + m2]
        self._source = (np.arange(N) + mode.m2) % N

    @property
    def dimension(self) -> int:
        return self.N

    @property
    def phases(self) -> ComplexArray:
        return self._phases

    def apply_array(self, coords: ComplexArray) -> ComplexArray:
        gathered = coords[self._source]
        gamma = self._phases[self._source]
        if coords.ndim == 1:
            return gamma * gathered
        return gamma[:, None] * gathered

    def matrix(self) -> ComplexArray:
        out = np.zeros((self.N, self.N), dtype=np.complex128)
        j = np.arange(self.N)
        out[(j - self.mode.m2) % self.N, j] = self._phases
        return out

    def __repr__(self) -> str:
        return f"Translation(N={self.N}, m={self.mode})"


def translation(N: int, m: _ModeLike) -> Translation:
    return Translation(N, FourierMode.of(m))


def translation_cocycle(N: int, m: _ModeLike, m_prime: _ModeLike) -> complex:
    """Phase in `W(m) W(m') = phase * W(m + m')`: `exp(pi i (m1' m2 - m1 m2') / N)`."""
    m, m_prime = FourierMode.of(m), FourierMode.of(m_prime)
    num = (m_prime.m1 * m.m2 - m.m1 * m_prime.m2) % (2 * N)
    return cmath.exp(1j * cmath.pi * num / N)


class TrigPolynomial(Operator):
    """Quantization of a trigonometric polynomial `sum_m c_m e^{2 pi i (m1 x + m2 xi)}`."""

    def __init__(self, N: int, coeffs: Mapping[FourierMode, complex]) -> None:
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        self.N = N
        self.coeffs = {mode: complex(c) for mode, c in coeffs.items() if c != 0}
        self._terms = [(c, Translation(N, mode)) for mode, c in self.coeffs.items()]

    @property
    def dimension(self) -> int:
        return self.N

    def is_real(self, tol: float = 1e-12) -> bool:
        """Hermitian symmetry `c_{-m} = conj(c_m)` of the coefficients."""
        return all(
            abs(self.coeffs.get(-mode, 0) - c.conjugate()) <= tol
            for mode, c in self.coeffs.items()
        )

    def apply_array(self, coords: ComplexArray) -> ComplexArray:
        out = np.zeros(coords.shape, dtype=np.complex128)
        for c, term in self._terms:
            out += c * term.apply_array(coords)
        return out

    def matrix(self) -> ComplexArray:
        out = np.zeros((self.N, self.N), dtype=np.complex128)
        for c, term in self._terms:
            out += c * term.matrix()
        return out


def quantize_trig(N: int, coeffs: Mapping[_ModeLike, complex]) -> TrigPolynomial:
    merged: dict[FourierMode, complex] = {}
    for m, c in coeffs.items():
        mode = FourierMode.of(m)
        merged[mode] = merged.get(mode, 0) + complex(c)
    return TrigPolynomial(N, merged)


def expectation(u: QuantumState, op: Operator) -> complex:
    """`<op u, u>`."""
    return op.apply(u).inner(u)
