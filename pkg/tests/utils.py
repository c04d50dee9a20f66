import cmath
import math
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from qcat.arith import validate_catmap

VALID_MATRICES = [
    (2, 3, 1, 2),
    (2, 1, 3, 2),
    (2, -3, -1, 2),
    (4, 3, 5, 4),
    (4, 5, 3, 4),
    (4, 1, 15, 4),
    (6, 5, 7, 6),
    (8, 7, 9, 8),
]


def catmaps():
    return st.sampled_from(VALID_MATRICES).map(lambda m: validate_catmap(*m))


def modes(radius=3):
    return st.tuples(st.integers(-radius, radius), st.integers(-radius, radius))


def random_state(N, seed=0):
    rng = np.random.default_rng(seed)
    coords = rng.normal(size=N) + 1j * rng.normal(size=N)
    return coords / np.linalg.norm(coords)


def naive_propagator(catmap, N):
    """Entry by entry Gauss sums with rational phases."""
    a, b, d = catmap.a, catmap.b, catmap.d
    out = np.empty((N, N), dtype=np.complex128)
    for k in range(N):
        for j in range(N):
            total = 0j
            for r in range(abs(b)):
                s = r * N + j
                phase = Fraction(a * s * s + d * k * k - 2 * k * s, 2 * N * b) % 1
                total += cmath.exp(2j * math.pi * float(phase))
            out[k, j] = total / math.sqrt(N * abs(b))
    return out


def brute_n_prime(catmap, q, limit):
    """Largest `N <= limit` with `A^q = I (mod N)`, by trying every modulus."""
    (a, b), (c, d) = catmap.matrix
    x = ((1, 0), (0, 1))
    for _ in range(q):
        (x11, x12), (x21, x22) = x
        x = ((x11 * a + x12 * c, x11 * b + x12 * d), (x21 * a + x22 * c, x21 * b + x22 * d))
    (x11, x12), (x21, x22) = x
    return max(
        N for N in range(1, limit + 1) if all(v % N == 0 for v in (x11 - 1, x12, x21, x22 - 1))
    )


def assert_unitary(matrix, tol=1e-8):
    gram = matrix.conj().T @ matrix
    assert np.max(np.abs(gram - np.eye(matrix.shape[0]))) <= tol
