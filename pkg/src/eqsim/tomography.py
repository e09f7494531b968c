"""Full-state tomography by linear inversion, the expensive baseline.

Every non-identity Pauli word is measured (4^n - 1 observables) and the
state is rebuilt as (I + sum_P <P> P) / 2^n.  Expectations come straight
from the simulator and may optionally be Gaussian-noised; no positivity
projection is applied, so an out-of-cone reconstruction is reported with
its minimum eigenvalue rather than repaired.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .qcore import (
    DensityMatrix,
    StateVector,
    operator_array,
    pauli_matrix,
    state_array,
)

MAX_TOMOGRAPHY_QUBITS = 4


@dataclass(frozen=True)
class TomographyResult:
    reconstructed: DensityMatrix
    expectations: tuple[tuple[str, float], ...]
    observable_count: int
    min_eigenvalue: float


def pauli_words(n: int):
    """All 4^n - 1 non-identity words on n qubits, in lexicographic order."""
    for letters in itertools.product("IXYZ", repeat=n):
        word = "".join(letters)
        if set(word) != {"I"}:
            yield word


def full_state_tomography(
    rho: DensityMatrix, *, noise_sigma: float = 0.0, rng=None
) -> TomographyResult:
    """Measure every Pauli word and invert linearly.

    With ``noise_sigma`` > 0 each expectation is perturbed by seeded
    Gaussian noise before inversion, mimicking finite measurement accuracy.
    """
    mat = operator_array(rho)
    n = rho.n if isinstance(rho, DensityMatrix) else int(np.log2(mat.shape[0]))
    if n > MAX_TOMOGRAPHY_QUBITS:
        raise ValueError(f"tomography guard: register of {n} qubits is too large")
    if noise_sigma and rng is None:
        rng = np.random.default_rng(0)

    dim = 2**n
    recon = np.eye(dim, dtype=complex)
    values = []
    for word in pauli_words(n):
        pmat = pauli_matrix(word).matrix
        value = float(np.trace(mat @ pmat).real)
        if noise_sigma:
            value += float(rng.normal(scale=noise_sigma))
        values.append((word, value))
        recon = recon + value * pmat
    recon /= dim

    min_eig = float(np.linalg.eigvalsh(recon).min())
    out = DensityMatrix(recon, validate_psd=not noise_sigma)
    return TomographyResult(out, tuple(values), len(values), min_eig)


def state_fidelity(rho: DensityMatrix, target: StateVector) -> float:
    """<target|rho|target> for a pure target state."""
    mat = operator_array(rho)
    amps = state_array(target)
    if mat.shape[0] != amps.size:
        raise ValueError("dimension mismatch in state_fidelity")
    return float(np.vdot(amps, mat @ amps).real)


def pps_deviation_fidelity(rho: DensityMatrix, target: StateVector, epsilon: float) -> float:
    """Fidelity of the polarization-normalized deviation part of a PPS.

    Removes the identity background (1 - eps)/2^n * I, rescales by eps and
    evaluates the pure-target fidelity of what remains; this is the number
    the spectrometer-visible part of the state is judged by.
    """
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    mat = operator_array(rho)
    dim = mat.shape[0]
    deviation = (mat - (1 - epsilon) / dim * np.eye(dim)) / epsilon
    amps = state_array(target)
    return float(np.vdot(amps, deviation @ amps).real)


def export_expectations(result: TomographyResult, path) -> None:
    lines = ["# pauli_word expectation"]
    for word, value in result.expectations:
        lines.append(f"{word} {value:.12e}")
    Path(path).write_text("\n".join(lines) + "\n")
