"""Shared oracles and random-input builders for the test suite.

Everything here is deliberately independent of the package internals:
Pauli matrices are written out, tensor products go through numpy.kron and
matrix exponentials through scipy, so tests check the package against a
second code path rather than against itself.
"""

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def kron_word(word: str) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for letter in word:
        out = np.kron(out, PAULI[letter])
    return out


def expm_evolve(h: np.ndarray, t: float, psi: np.ndarray) -> np.ndarray:
    """scipy-based evolution oracle, independent of the eigh path."""
    return expm(-1j * np.asarray(h, dtype=complex) * t) @ np.asarray(psi, dtype=complex)


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return vec / np.linalg.norm(vec)


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    mat = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    return scale * (mat + mat.conj().T) / 2.0


def random_density(rng: np.random.Generator, n: int) -> np.ndarray:
    mat = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    rho = mat @ mat.conj().T
    return rho / np.trace(rho)


def random_product_state(rng: np.random.Generator, n: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(n):
        out = np.kron(out, random_state(rng, 1))
    return out


def antilinear_bracket(psi: np.ndarray, obs: np.ndarray) -> complex:
    """Literal <psi|O|psi*> contraction."""
    return complex(np.vdot(psi, obs @ psi.conj()))
