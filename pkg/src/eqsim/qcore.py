"""Dense quantum-state kernel for registers of up to eight qubits.

Conventions, fixed package-wide:

* Qubit 0 is the leftmost letter of an operator word and the most
  significant bit of an amplitude index.  This matches ``numpy.kron``
  order, so the word "XY" is ``kron(X, Y)`` and ``|01>`` is index 1.
* Hamiltonians carry angular-frequency units (rad/s, hbar = 1) and
  evolution times are seconds.
* Matrix exponentials go through Hermitian eigendecomposition, never a
  series expansion; at dimension <= 256 exactness beats speed.
* All values are immutable after construction and every operation is a
  pure function, so independent inputs (e.g. time points) may be
  evaluated concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol

MAX_QUBITS = 8

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _nqubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise ValueError(f"register of {n} qubits exceeds the supported {MAX_QUBITS}")
    return n


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError("non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PauliString:
    """An n-qubit word over {I, X, Y, Z} with a real coefficient."""

    word: str
    coefficient: float = 1.0

    def __post_init__(self):
        if not 1 <= len(self.word) <= MAX_QUBITS:
            raise ValueError(f"word length must be in 1..{MAX_QUBITS}, got {self.word!r}")
        bad = set(self.word) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters {bad!r} in {self.word!r}")

    @property
    def n(self) -> int:
        return len(self.word)


class StateVector:
    """Unit-norm pure state; amplitudes ordered with qubit 0 as the MSB."""

    __slots__ = ("amplitudes", "n")

    def __init__(self, amplitudes):
        amps = _freeze(np.asarray(amplitudes, dtype=complex).reshape(-1))
        self.amplitudes = amps
        self.n = _nqubits(amps.size)
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > tol.UNIT_NORM:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {tol.UNIT_NORM}")

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "StateVector":
        amps = np.zeros(2**n, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def from_bits(cls, bits: str) -> "StateVector":
        return cls.basis(len(bits), int(bits, 2))

    def __array__(self, dtype=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"StateVector(n={self.n})"


class DensityMatrix:
    """Hermitian, unit-trace matrix; positivity checked unless disabled."""

    __slots__ = ("matrix", "n")

    def __init__(self, matrix, *, validate_psd: bool = True):
        mat = _freeze(np.asarray(matrix, dtype=complex))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        self.matrix = mat
        self.n = _nqubits(mat.shape[0])
        if np.abs(mat - mat.conj().T).max() > tol.HERMITICITY:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > tol.TRACE_ONE:
            raise ValueError(f"trace {np.trace(mat)} deviates from 1")
        if validate_psd:
            lo = np.linalg.eigvalsh(mat).min()
            if lo < tol.EIGENVALUE_FLOOR:
                raise ValueError(f"minimum eigenvalue {lo} below {tol.EIGENVALUE_FLOOR}")

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        amps = state.amplitudes
        return cls(np.outer(amps, amps.conj()))

    def __array__(self, dtype=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(n={self.n})"


class HermitianOperator:
    __slots__ = ("matrix", "n")

    def __init__(self, matrix):
        mat = np.asarray(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("operator must be square")
        if np.abs(mat - mat.conj().T).max() > tol.HERMITICITY:
            raise ValueError("operator is not Hermitian")
        # store the exactly Hermitian part to kill rounding residue
        self.matrix = _freeze((mat + mat.conj().T) / 2.0)
        self.n = _nqubits(mat.shape[0])

    def __array__(self, dtype=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"HermitianOperator(n={self.n})"


class UnitaryMatrix:
    __slots__ = ("matrix", "n")

    def __init__(self, matrix):
        mat = _freeze(np.asarray(matrix, dtype=complex))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("operator must be square")
        self.matrix = mat
        self.n = _nqubits(mat.shape[0])
        defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
        if defect > tol.UNITARITY:
            raise ValueError(f"unitarity defect {defect} beyond {tol.UNITARITY}")

    def __array__(self, dtype=None):
        return np.asarray(self.matrix, dtype=dtype)

    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self.matrix.conj().T)

    def __repr__(self):
        return f"UnitaryMatrix(n={self.n})"


# ---------------------------------------------------------------------------
# coercion helpers: public operations accept the wrappers or bare arrays

def state_array(state) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    return np.asarray(state, dtype=complex).reshape(-1)


def operator_array(op) -> np.ndarray:
    if isinstance(op, (HermitianOperator, UnitaryMatrix, DensityMatrix)):
        return op.matrix
    if isinstance(op, PauliString):
        return pauli_matrix(op).matrix
    return np.asarray(op, dtype=complex)


# ---------------------------------------------------------------------------
# operations

def pauli_matrix(word) -> HermitianOperator:
    """Tensor product of single-qubit Pauli matrices, scaled by the coefficient.

    Accepts a :class:`PauliString` or a plain word like ``"ZYY"``.  Qubit 0 is
    the leftmost letter.
    """
    ps = word if isinstance(word, PauliString) else PauliString(str(word))
    mat = np.array([[ps.coefficient]], dtype=complex)
    for letter in ps.word:
        mat = np.kron(mat, PAULI[letter])
    return HermitianOperator(mat)


def tensor(a, b):
    """Kronecker product of two states or two operators (left factor on top)."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, HermitianOperator) and isinstance(b, HermitianOperator):
        return HermitianOperator(np.kron(a.matrix, b.matrix))
    if isinstance(a, UnitaryMatrix) and isinstance(b, UnitaryMatrix):
        return UnitaryMatrix(np.kron(a.matrix, b.matrix))
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def matrix_exponential(h, t: float) -> UnitaryMatrix:
    """exp(-i h t) through the eigendecomposition of the Hermitian ``h``."""
    mat = operator_array(h)
    if np.abs(mat - mat.conj().T).max() > tol.HERMITICITY:
        raise ValueError("matrix_exponential requires a Hermitian generator")
    w, v = np.linalg.eigh(mat)
    return UnitaryMatrix((v * np.exp(-1j * w * t)) @ v.conj().T)


def evolve(state: StateVector, h, t: float) -> StateVector:
    """Propagate ``state`` under exp(-i h t); ``h`` in rad/s, ``t`` in seconds."""
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    amps = state_array(state)
    mat = operator_array(h)
    if mat.shape[0] != amps.size:
        raise ValueError(f"dimension mismatch: state {amps.size}, operator {mat.shape[0]}")
    if np.abs(mat - mat.conj().T).max() > tol.HERMITICITY:
        raise ValueError("evolve requires a Hermitian generator")
    w, v = np.linalg.eigh(mat)
    out = v @ (np.exp(-1j * w * t) * (v.conj().T @ amps))
    return StateVector(out)


def apply_unitary(u, state: StateVector) -> StateVector:
    umat = operator_array(u)
    amps = state_array(state)
    if umat.shape[1] != amps.size:
        raise ValueError("dimension mismatch in apply_unitary")
    return StateVector(umat @ amps)


def expectation(state, obs) -> float:
    """<psi|obs|psi> or tr(rho obs); the tiny imaginary residue is asserted away."""
    omat = operator_array(obs)
    if isinstance(state, DensityMatrix) or (
        not isinstance(state, StateVector) and np.asarray(state).ndim == 2
    ):
        rho = operator_array(state)
        if rho.shape != omat.shape:
            raise ValueError("dimension mismatch in expectation")
        value = np.trace(rho @ omat)
    else:
        amps = state_array(state)
        if omat.shape[0] != amps.size:
            raise ValueError("dimension mismatch in expectation")
        value = np.vdot(amps, omat @ amps)
    if abs(value.imag) > tol.IMAG_RESIDUE:
        raise ValueError(f"expectation has imaginary residue {value.imag}")
    return float(value.real)


def conjugate_state(state: StateVector) -> StateVector:
    """Element-wise complex conjugation of the amplitudes (the K operation)."""
    return StateVector(state_array(state).conj())


def partial_expectation(state, obs, projector_word: str) -> float:
    """<obs x |b><b|> where ``projector_word`` fixes the trailing qubits.

    ``projector_word`` is a bit string such as ``"0"``; the observable covers
    the leading qubits.  No renormalization is applied, so the value is the
    raw expectation of the projected operator.
    """
    if set(projector_word) - {"0", "1"}:
        raise ValueError(f"projector word must be bits, got {projector_word!r}")
    omat = operator_array(obs)
    proj = np.array([[1.0]], dtype=complex)
    for b in projector_word:
        k = int(b)
        p = np.zeros((2, 2), dtype=complex)
        p[k, k] = 1.0
        proj = np.kron(proj, p)
    full = np.kron(omat, proj)
    return expectation(state, full)


def embed_operator(mat, qubits, n: int) -> np.ndarray:
    """Expand an operator acting on ``qubits`` to the full 2**n space."""
    mat = np.asarray(mat, dtype=complex)
    qubits = list(qubits)
    k = len(qubits)
    if mat.shape != (2**k, 2**k):
        raise ValueError("operator shape does not match the target qubit count")
    if len(set(qubits)) != k or any(q < 0 or q >= n for q in qubits):
        raise ValueError(f"invalid target qubits {qubits} for register of {n}")
    rest = [q for q in range(n) if q not in qubits]
    perm = qubits + rest
    full = np.kron(mat, np.eye(2 ** (n - k), dtype=complex))
    tensor_axes = full.reshape([2] * (2 * n))
    inv = np.argsort(perm)
    reordered = tensor_axes.transpose(list(inv) + [n + i for i in inv])
    return np.ascontiguousarray(reordered.reshape(2**n, 2**n))


def partial_trace(rho, keep) -> np.ndarray:
    """Trace out every qubit not listed in ``keep`` (order preserved)."""
    mat = operator_array(rho)
    n = _nqubits(mat.shape[0])
    keep = list(keep)
    drop = [q for q in range(n) if q not in keep]
    tens = mat.reshape([2] * (2 * n))
    for q in sorted(drop, reverse=True):
        tens = np.trace(tens, axis1=q, axis2=q + tens.ndim // 2)
    return tens.reshape(2 ** len(keep), 2 ** len(keep))


def trace_fidelity(u, v) -> float:
    """Global-phase-invariant unitary overlap |tr(v^dag u)| / dim."""
    umat = operator_array(u)
    vmat = operator_array(v)
    if umat.shape != vmat.shape:
        raise ValueError("dimension mismatch in trace_fidelity")
    return float(abs(np.trace(vmat.conj().T @ umat)) / umat.shape[0])
