"""Concurrence and three-tangle, each computed two ways.

The direct route contracts the anti-linear bracket on the simulated
wavefunction and serves as the oracle.  The reduced route consumes only the
small set of ordinary observables available in the enlarged space: two for
the concurrence, six for the three-tangle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedding import (
    AntilinearOperator,
    antilinear_expectation_direct,
    antilinear_expectation_eqs,
)
from .qcore import StateVector

# Enlarged-space observable words, leftmost letter on the ancilla.
CONCURRENCE_OBSERVABLES = ("ZYY", "XYY")
THREE_TANGLE_OBSERVABLES = ("ZIYY", "XIYY", "ZXYY", "XXYY", "ZZYY", "XZYY")

# q_k = <O_k K> enters |-q1^2 + q2^2 + q3^2| with these signs.
_TANGLE_SIGNS = (-1.0, 1.0, 1.0)
_TANGLE_PARTS = ("IYY", "XYY", "ZYY")


@dataclass(frozen=True)
class MonotoneResult:
    value: float
    constituents: tuple[tuple[str, float], ...]
    method: str

    def __post_init__(self):
        if not -1e-10 <= self.value <= 1 + 1e-10:
            raise ValueError(f"monotone value {self.value} outside [0, 1]")


def _clamp(value: float) -> float:
    # values are magnitudes; clip tiny negative floating residue
    return max(value, 0.0)


def _bracket_constituents(words, brackets) -> tuple[tuple[str, float], ...]:
    # Re<OK> = <sigma_z O>, Im<OK> = -<sigma_x O>: report the pair an
    # enlarged-space measurement would produce, so both routes are comparable.
    out = []
    for (zword, xword), q in zip(words, brackets):
        out.append((zword, q.real))
        out.append((xword, -q.imag))
    return tuple(out)


def concurrence_direct(phi: StateVector) -> MonotoneResult:
    """|<phi| sigma_y sigma_y |phi*>| for a pure two-qubit state."""
    if phi.n != 2:
        raise ValueError(f"concurrence_direct expects 2 qubits, got {phi.n}")
    q = antilinear_expectation_direct(phi, AntilinearOperator.from_word("YY"))
    constituents = _bracket_constituents([CONCURRENCE_OBSERVABLES], [q])
    return MonotoneResult(_clamp(abs(q)), constituents, "direct")


def concurrence_eqs(big: StateVector) -> MonotoneResult:
    """Concurrence from the two enlarged-space observables ZYY and XYY."""
    if big.n != 3:
        raise ValueError(f"concurrence_eqs expects an embedded 2-qubit state, got {big.n}")
    q = antilinear_expectation_eqs(big, AntilinearOperator.from_word("YY"))
    constituents = _bracket_constituents([CONCURRENCE_OBSERVABLES], [q])
    return MonotoneResult(_clamp(abs(q)), constituents, "eqs")


def concurrence_from_expectations(zyy: float, xyy: float, method: str = "eqs") -> MonotoneResult:
    """Assemble the concurrence from measured <ZYY> and <XYY> values."""
    q = complex(zyy, -xyy)
    constituents = ((CONCURRENCE_OBSERVABLES[0], zyy), (CONCURRENCE_OBSERVABLES[1], xyy))
    return MonotoneResult(_clamp(abs(q)), constituents, method)


def _tangle_value(brackets) -> float:
    # complex squares first, modulus last; no premature magnitude
    total = sum(s * q * q for s, q in zip(_TANGLE_SIGNS, brackets))
    return _clamp(abs(total))


def three_tangle_direct(phi: StateVector) -> MonotoneResult:
    """|-<O1 K>^2 + <O2 K>^2 + <O3 K>^2| on a pure three-qubit state."""
    if phi.n != 3:
        raise ValueError(f"three_tangle_direct expects 3 qubits, got {phi.n}")
    brackets = [
        antilinear_expectation_direct(phi, AntilinearOperator.from_word(w))
        for w in _TANGLE_PARTS
    ]
    words = list(zip(THREE_TANGLE_OBSERVABLES[0::2], THREE_TANGLE_OBSERVABLES[1::2]))
    return MonotoneResult(_tangle_value(brackets), _bracket_constituents(words, brackets), "direct")


def three_tangle_eqs(big: StateVector) -> MonotoneResult:
    """Three-tangle from the six enlarged-space observables."""
    if big.n != 4:
        raise ValueError(f"three_tangle_eqs expects an embedded 3-qubit state, got {big.n}")
    brackets = [
        antilinear_expectation_eqs(big, AntilinearOperator.from_word(w))
        for w in _TANGLE_PARTS
    ]
    words = list(zip(THREE_TANGLE_OBSERVABLES[0::2], THREE_TANGLE_OBSERVABLES[1::2]))
    return MonotoneResult(_tangle_value(brackets), _bracket_constituents(words, brackets), "eqs")


def three_tangle_from_expectations(values: dict, method: str = "eqs") -> MonotoneResult:
    """Assemble the three-tangle from the six measured observable values.

    ``values`` maps each word in :data:`THREE_TANGLE_OBSERVABLES` to its
    expectation value.
    """
    missing = [w for w in THREE_TANGLE_OBSERVABLES if w not in values]
    if missing:
        raise ValueError(f"missing observables {missing}")
    brackets = [
        complex(values[zw], -values[xw])
        for zw, xw in zip(THREE_TANGLE_OBSERVABLES[0::2], THREE_TANGLE_OBSERVABLES[1::2])
    ]
    constituents = tuple((w, float(values[w])) for w in THREE_TANGLE_OBSERVABLES)
    return MonotoneResult(_tangle_value(brackets), constituents, method)
