"""One-ancilla embedding of states and Hamiltonians.

A Hamiltonian splits into real and imaginary parts, H = A + iB, with A real
symmetric and B real antisymmetric.  A state |phi> on n qubits maps to

    |Phi> = |0> (x) Re|phi> + |1> (x) Im|phi>

on n+1 qubits (the ancilla is qubit 0), and the dynamics map to

    H' = i sigma_0 (x) B - sigma_y (x) A ,

which is Hermitian.  Evolving |Phi> under H' commutes with the map, and the
bracket <phi|O|phi*> of an anti-linear operator OK becomes a pair of ordinary
expectation values in the enlarged space:

    <phi|O|phi*> = <sigma_z (x) O> - i <sigma_x (x) O> .

Decoding inverts the state map and deliberately rejects inputs that have
drifted off the image manifold, since that signals a wrong evolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .qcore import (
    HermitianOperator,
    PauliString,
    StateVector,
    operator_array,
    pauli_matrix,
    state_array,
)


@dataclass(frozen=True)
class RealImagSplit:
    """Real symmetric part ``a`` and real antisymmetric part ``b`` of H = a + i b."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("a and b must be equal-size square matrices")
        if np.abs(a - a.T).max() > tol.HERMITICITY:
            raise ValueError("a must be symmetric")
        if np.abs(b + b.T).max() > tol.HERMITICITY:
            raise ValueError("b must be antisymmetric")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def reconstruct(self) -> HermitianOperator:
        return HermitianOperator(self.a + 1j * self.b)


@dataclass(frozen=True)
class AntilinearOperator:
    """Composition O·K of a Hermitian observable with complex conjugation."""

    operator: HermitianOperator

    @classmethod
    def from_word(cls, word: str, coefficient: float = 1.0) -> "AntilinearOperator":
        return cls(pauli_matrix(PauliString(word, coefficient)))

    @property
    def n(self) -> int:
        return self.operator.n


def split_hamiltonian(h) -> RealImagSplit:
    """Split a Hermitian matrix into its real and imaginary parts.

    The input is validated against a 1e-10 Hermiticity tolerance and the
    parts are symmetrized/antisymmetrized so that rounding residue cannot
    leak a non-Hermitian embedded Hamiltonian downstream.
    """
    mat = operator_array(h)
    if np.abs(mat - mat.conj().T).max() > tol.SPLIT_HERMITICITY:
        raise ValueError("split_hamiltonian requires a Hermitian input")
    a = mat.real
    b = mat.imag
    return RealImagSplit((a + a.T) / 2.0, (b - b.T) / 2.0)


def embed_state(phi: StateVector) -> StateVector:
    """Prepend the ancilla: |0>(x)Re|phi> + |1>(x)Im|phi>.

    Unit norm is preserved exactly because ||Re phi||^2 + ||Im phi||^2 = 1.
    """
    amps = state_array(phi)
    return StateVector(np.concatenate([amps.real, amps.imag]).astype(complex))


def embed_hamiltonian(split: RealImagSplit) -> HermitianOperator:
    """H' = i sigma_0 (x) B - sigma_y (x) A on n+1 qubits."""
    eye = np.eye(2, dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    hp = 1j * np.kron(eye, split.b) - np.kron(sy, split.a)
    return HermitianOperator(hp)  # constructor asserts Hermiticity


def decode_state(big: StateVector) -> StateVector:
    """Invert the embedding: phi = (ancilla-|0> block) + i (ancilla-|1> block).

    Raises when the decoded norm deviates from 1 by more than 1e-9; a larger
    deviation means the embedded state left the valid image manifold.  Below
    that threshold the output is renormalized.
    """
    amps = state_array(big)
    half = amps.size // 2
    phi = amps[:half] + 1j * amps[half:]
    norm = np.linalg.norm(phi)
    if abs(norm - 1.0) > tol.DECODE_NORM:
        raise ValueError(
            f"decoded norm {norm} deviates from 1 beyond {tol.DECODE_NORM}; "
            "embedded state is off the valid manifold"
        )
    return StateVector(phi / norm)


def antilinear_expectation_direct(phi: StateVector, op: AntilinearOperator) -> complex:
    """Literal bracket <phi|O|phi*>; the brute-force oracle."""
    amps = state_array(phi)
    omat = operator_array(op.operator)
    if omat.shape[0] != amps.size:
        raise ValueError("dimension mismatch in antilinear_expectation_direct")
    return complex(np.vdot(amps, omat @ amps.conj()))


def antilinear_expectation_eqs(big: StateVector, op: AntilinearOperator) -> complex:
    """<sigma_z (x) O> - i <sigma_x (x) O> on the embedded state."""
    amps = state_array(big)
    omat = operator_array(op.operator)
    if 2 * omat.shape[0] != amps.size:
        raise ValueError("embedded state must carry one more qubit than the observable")
    half = amps.size // 2
    top, bot = amps[:half], amps[half:]
    # sigma_z (x) O : <top|O|top> - <bot|O|bot>;  sigma_x (x) O : <top|O|bot> + <bot|O|top>
    zval = np.vdot(top, omat @ top) - np.vdot(bot, omat @ bot)
    xval = np.vdot(top, omat @ bot) + np.vdot(bot, omat @ top)
    return complex(zval - 1j * xval)
