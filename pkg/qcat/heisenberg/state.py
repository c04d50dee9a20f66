from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qcat.types import ComplexArray, IntPair


@dataclass(frozen=True)
class FourierMode:
    """Wave numbers of `e^{2 pi i (m1 x + m2 xi)}`."""

    m1: int
    m2: int

    @classmethod
    def of(cls, m: FourierMode | IntPair) -> FourierMode:
        if isinstance(m, FourierMode):
            return m
        m1, m2 = m
        return cls(int(m1), int(m2))

    @property
    def pair(self) -> IntPair:
        return self.m1, self.m2

    def norm(self) -> float:
        return float(np.hypot(self.m1, self.m2))

    def __neg__(self) -> FourierMode:
        return FourierMode(-self.m1, -self.m2)

    def __add__(self, other: FourierMode) -> FourierMode:
        return FourierMode(self.m1 + other.m1, self.m2 + other.m2)

    def __str__(self) -> str:
        return f"({self.m1},{self.m2})"


class QuantumState:
    """Coordinates of a state against the standard basis `{e_j^0}` of the N-dimensional space."""

    __slots__ = ("N", "coords")

    def __init__(self, N: int, coords: ComplexArray) -> None:
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        coords = np.asarray(coords, dtype=np.complex128)
        if coords.shape != (N,):
            raise ValueError(f"Expected {N} coordinates, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise ValueError("State has non-finite coordinates")
        self.N = N
        self.coords = coords

    @classmethod
    def basis(cls, N: int, j: int) -> QuantumState:
        coords = np.zeros(N, dtype=np.complex128)
        coords[j % N] = 1.0
        return cls(N, coords)

    def norm(self, p: float = 2) -> float:
        return float(np.linalg.norm(self.coords, ord=p))

    def linf(self) -> float:
        return float(np.max(np.abs(self.coords)))

    def inner(self, other: QuantumState) -> complex:
        """`<self, other>`, linear in the first argument."""
        if other.N != self.N:
            raise ValueError(f"Dimension mismatch: {self.N} vs {other.N}")
        return complex(np.vdot(other.coords, self.coords))

    def scaled(self, factor: complex) -> QuantumState:
        return QuantumState(self.N, self.coords * factor)

    def __sub__(self, other: QuantumState) -> QuantumState:
        if other.N != self.N:
            raise ValueError(f"Dimension mismatch: {self.N} vs {other.N}")
        return QuantumState(self.N, self.coords - other.coords)

    def __repr__(self) -> str:
        return f"QuantumState(N={self.N}, norm={self.norm():.6g})"
