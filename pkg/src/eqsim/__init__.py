"""Ancilla-embedding quantum simulation toolkit.

Maps few-qubit problems into a one-ancilla enlarged space where anti-linear
brackets, and with them entanglement monotones, become ordinary expectation
values of a handful of observables.  Includes gate- and pulse-level backends
for a small homonuclear spin register, shaped-pulse synthesis, a tomography
baseline and error-bar bookkeeping.
"""

from .embedding import (
    AntilinearOperator,
    RealImagSplit,
    antilinear_expectation_direct,
    antilinear_expectation_eqs,
    decode_state,
    embed_hamiltonian,
    embed_state,
    split_hamiltonian,
)
from .monotones import (
    MonotoneResult,
    concurrence_direct,
    concurrence_eqs,
    three_tangle_direct,
    three_tangle_eqs,
)
from .qcore import (
    DensityMatrix,
    HermitianOperator,
    PauliString,
    StateVector,
    UnitaryMatrix,
    conjugate_state,
    evolve,
    expectation,
    matrix_exponential,
    pauli_matrix,
    tensor,
)
from .runner import ExperimentConfig, TimeSeriesRecord, emit, run_experiment

__version__ = "0.1.0"
