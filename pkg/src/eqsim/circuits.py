"""Gate-level programs for the embedded evolutions and their NMR readout.

The embedded Hamiltonians are single Pauli-word generators, so their
exponentials compile to a CNOT conjugation sandwich around one ancilla
rotation R_y(theta) with theta = -2 omega t.  CNOTs decompose into local
rotations plus one ZZ coupling evolution; z-rotations further reduce to x/y
rotations for hardware without a z axis.

Readout planning maps each enlarged-space observable to a spin-detectable
observable (first letter sigma_x or sigma_y, the rest sigma_0/sigma_z,
optionally a trailing |k><k| projector) via a word of +-pi/2 rotations.  The
sign relating the two expectations is always computed by conjugation, never
transcribed, because the arrow convention of the source mappings is
ambiguous up to U O U^dag versus U^dag O U.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import (
    PAULI,
    PauliString,
    UnitaryMatrix,
    embed_operator,
    pauli_matrix,
)

GATE_NAMES = ("CNOT", "RX", "RY", "RZ", "J", "BARRIER")

CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

# Ancilla lives on spin C3; work qubits follow the coupling delays
# tau_1 = 1/2J(C3,C4) and tau_2 = 1/2J(C3,C2); the last spin is the
# spectator (or third work qubit in the four-qubit program).
DEFAULT_QUBIT_MAP = ("C3", "C4", "C2", "C1")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    param: float | None = None

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.name} {self.qubits}")
        if self.name in ("RX", "RY", "RZ") and not (
            len(self.qubits) == 1 and self.param is not None
        ):
            raise ValueError(f"rotation gate needs one qubit and an angle: {self}")
        if self.name == "CNOT" and len(self.qubits) != 2:
            raise ValueError("CNOT needs distinct control and target")
        if self.name == "J" and not (
            len(self.qubits) == 2 and self.param is not None and self.param >= 0
        ):
            raise ValueError("J gate needs two qubits and a non-negative duration")


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def rx(qubit: int, angle: float) -> Gate:
    return Gate("RX", (qubit,), angle)


def ry(qubit: int, angle: float) -> Gate:
    return Gate("RY", (qubit,), angle)


def rz(qubit: int, angle: float) -> Gate:
    return Gate("RZ", (qubit,), angle)


def jgate(a: int, b: int, duration: float) -> Gate:
    return Gate("J", (a, b), duration)


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...]
    qubit_map: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q < 0 or q >= self.n for q in g.qubits):
                raise ValueError(f"gate {g} outside register of {self.n} qubits")
        if self.qubit_map is not None and len(self.qubit_map) != self.n:
            raise ValueError("qubit_map length must equal the register size")


def _rotation(axis: str, angle: float) -> np.ndarray:
    gen = PAULI[axis]
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * gen


def _resolve_j(couplings, a: int, b: int) -> float:
    if couplings is None:
        raise ValueError("circuit contains a J gate but no coupling table was given")
    if hasattr(couplings, "j_between"):
        return float(couplings.j_between(a, b))
    key = (min(a, b), max(a, b))
    return float(couplings[key])


def gate_unitary(gate: Gate, n: int, couplings=None) -> np.ndarray:
    if gate.name == "BARRIER":
        return np.eye(2**n, dtype=complex)
    if gate.name == "CNOT":
        return embed_operator(CNOT_MATRIX, gate.qubits, n)
    if gate.name in ("RX", "RY", "RZ"):
        return embed_operator(_rotation(gate.name[1], gate.param), gate.qubits, n)
    if gate.name == "J":
        j_hz = _resolve_j(couplings, *gate.qubits)
        zz = np.kron(PAULI["Z"], PAULI["Z"])
        phase = math.pi / 2 * j_hz * gate.param
        u2 = np.diag(np.exp(-1j * phase * np.diag(zz)))
        return embed_operator(u2, gate.qubits, n)
    raise ValueError(f"unknown gate {gate.name!r}")


def circuit_to_unitary(circuit: Circuit, couplings=None) -> UnitaryMatrix:
    """Ordered product of the gate matrices (gates listed in time order).

    ``couplings`` resolves J-gate strengths: a mapping ``(a, b) -> Hz`` with
    sorted index pairs, or any object exposing ``j_between(a, b)``.
    """
    total = np.eye(2**circuit.n, dtype=complex)
    for gate in circuit.gates:
        total = gate_unitary(gate, circuit.n, couplings) @ total
    return UnitaryMatrix(total)


def build_eqs_circuit(model: str, t: float, omega: float) -> Circuit:
    """Gate program for the embedded evolution exp(-i H' t).

    ``model`` selects the two-qubit ("2q") or three-qubit ("3q") problem,
    whose embedded generators are -omega * YXX and -omega * YXXX.  The
    program is the CNOT conjugation sandwich around R_y(theta) on the
    ancilla with theta = -2 omega t; it reproduces the exponential exactly,
    with no global phase left over.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    if model == "2q":
        works = (1, 2)
    elif model == "3q":
        works = (1, 2, 3)
    else:
        raise ValueError(f"unknown model {model!r}; expected '2q' or '3q'")
    n = len(works) + 1
    theta = -2.0 * omega * t
    fan = [cnot(0, w) for w in works]
    gates = fan + [ry(0, theta)] + fan
    return Circuit(n, tuple(gates), DEFAULT_QUBIT_MAP[:n])


def simplify_for_zero_input(circuit: Circuit) -> Circuit:
    """Drop leading CNOTs, which act trivially when every qubit starts in |0>.

    Until the first non-CNOT gate no control can have left |0>, so every
    leading CNOT is an identity on |0...0> regardless of orientation.
    """
    gates = list(circuit.gates)
    k = 0
    while k < len(gates) and gates[k].name == "CNOT":
        k += 1
    return Circuit(circuit.n, tuple(gates[k:]), circuit.qubit_map)


def decompose_cnot(control: int, target: int, j_hz: float) -> Circuit:
    """NMR-native CNOT: local rotations around one ZZ coupling evolution.

    Time-ordered gate list for
    sqrt(i) Rz^a(pi/2) Rz^b(-pi/2) Rx^b(pi/2) U(1/2J) Ry^b(pi/2),
    where U(1/2J) is the coupling evolution exp(-i pi ZZ / 4) reached by a
    delay of 1/(2 J).  The sqrt(i) is a global phase and is not represented.
    """
    if control == target:
        raise ValueError("control and target must differ")
    if j_hz <= 0:
        raise ValueError(f"coupling must be positive, got {j_hz}")
    a, b = control, target
    gates = (
        ry(b, math.pi / 2),
        jgate(a, b, 1.0 / (2.0 * j_hz)),
        rx(b, math.pi / 2),
        rz(b, -math.pi / 2),
        rz(a, math.pi / 2),
    )
    n = max(a, b) + 1
    return Circuit(n, gates)


def decompose_rz(qubit: int, angle: float) -> tuple[Gate, Gate, Gate]:
    """R_z(theta) = R_y(pi/2) R_x(-theta) R_y(-pi/2), listed in time order."""
    return (ry(qubit, -math.pi / 2), rx(qubit, -angle), ry(qubit, math.pi / 2))


# ---------------------------------------------------------------------------
# readout planning

# Rotation-word letters: X = exp(-i sigma_x pi/4), Y = exp(-i sigma_y pi/4),
# B = exp(+i sigma_y pi/4) (the inverse of Y).
ROTATION_LETTERS = {
    "I": np.eye(2, dtype=complex),
    "X": _rotation("X", math.pi / 2),
    "Y": _rotation("Y", math.pi / 2),
    "B": _rotation("Y", -math.pi / 2),
}

# target word -> (rotation word, detectable word); targets are written in the
# enlarged-space register order with the ancilla first.
_READOUT_TABLE = {
    "ZYY": ("YXX", "XZZ"),
    "XYY": ("IXX", "XZZ"),
    "XIYY": ("IIXX", "XIZZ"),
    "XZYY": ("IIXX", "XZZZ"),
    "ZIYY": ("YIXX", "XIZZ"),
    "ZZYY": ("YIXX", "XZZZ"),
    "ZXYY": ("YBXX", "XZZZ"),
    "XXYY": ("IBXX", "XZZZ"),
}


@dataclass(frozen=True)
class ReadoutPlan:
    """Rotation word plus the detectable observable it exposes.

    ``measured`` has the spin-detectable form (first letter X or Y, the rest
    I/Z); ``spectator_bits`` appends a |k><k| projector per trailing idle
    qubit.  ``sign`` satisfies  <target> on rho = sign * <measured> on the
    rotated state R rho R^dag.
    """

    target: PauliString
    rotation_word: str
    measured: PauliString
    spectator_bits: str = ""
    sign: float = 1.0

    def __post_init__(self):
        word = self.measured.word
        if word[0] not in "XY" or set(word[1:]) - {"I", "Z"}:
            raise ValueError(f"{word!r} is not a detectable observable form")
        if len(self.rotation_word) != len(word) + len(self.spectator_bits):
            raise ValueError("rotation word must cover the full register")

    @property
    def n(self) -> int:
        return len(self.rotation_word)


def rotation_word_unitary(word: str) -> UnitaryMatrix:
    mat = np.array([[1.0]], dtype=complex)
    for letter in word:
        try:
            mat = np.kron(mat, ROTATION_LETTERS[letter])
        except KeyError:
            raise ValueError(f"unknown rotation letter {letter!r}") from None
    return UnitaryMatrix(mat)


def _projector_matrix(bits: str) -> np.ndarray:
    mat = np.array([[1.0]], dtype=complex)
    for b in bits:
        p = np.zeros((2, 2), dtype=complex)
        p[int(b), int(b)] = 1.0
        mat = np.kron(mat, p)
    return mat


def plan_observable_matrix(plan: ReadoutPlan, which: str = "measured") -> np.ndarray:
    """Full-register matrix of the plan's target or measured observable."""
    ps = plan.measured if which == "measured" else plan.target
    mat = pauli_matrix(ps).matrix
    if plan.spectator_bits:
        mat = np.kron(mat, _projector_matrix(plan.spectator_bits))
    return mat


def plan_readout(target_obs, spectator_bits: str = "") -> ReadoutPlan:
    """Build the readout plan for one of the supported enlarged-space observables.

    ``spectator_bits`` appends |k><k| projectors for trailing idle qubits
    (e.g. ``"0"`` when one spectator spin is parked in |0>).  The sign is
    determined numerically by conjugating the detectable observable back
    through the rotation word and comparing against the target.
    """
    ps = target_obs if isinstance(target_obs, PauliString) else PauliString(str(target_obs))
    if ps.coefficient != 1.0:
        raise ValueError("readout targets must carry coefficient 1")
    if set(spectator_bits) - {"0", "1"}:
        raise ValueError(f"spectator bits must be 0/1, got {spectator_bits!r}")
    try:
        rot_word, measured_word = _READOUT_TABLE[ps.word]
    except KeyError:
        raise ValueError(
            f"{ps.word!r} is not a supported readout target; "
            f"supported: {sorted(_READOUT_TABLE)}"
        ) from None
    rot_word = rot_word + "I" * len(spectator_bits)
    plan = ReadoutPlan(ps, rot_word, PauliString(measured_word), spectator_bits, 1.0)

    rmat = rotation_word_unitary(rot_word).matrix
    target_mat = plan_observable_matrix(plan, "target")
    back = rmat.conj().T @ plan_observable_matrix(plan, "measured") @ rmat
    scale = np.vdot(target_mat, back).real / np.vdot(target_mat, target_mat).real
    sign = 1.0 if scale > 0 else -1.0
    if np.abs(back - sign * target_mat).max() > 1e-12:
        raise ValueError(f"conjugation of {ps.word} does not close onto the target")
    if sign == 1.0:
        return plan
    return ReadoutPlan(ps, rot_word, PauliString(measured_word), spectator_bits, sign)


# ---------------------------------------------------------------------------
# serialization: one gate per line, e.g. "CNOT 0 1" / "RY 0 -0.7853981634"

def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"# qubits {circuit.n}"]
    if circuit.qubit_map:
        lines.append("# map " + " ".join(circuit.qubit_map))
    for g in circuit.gates:
        parts = [g.name] + [str(q) for q in g.qubits]
        if g.param is not None:
            parts.append(repr(float(g.param)))  # shortest exact round trip
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    n = None
    qubit_map = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = line[1:].split()
            if fields and fields[0] == "qubits":
                n = int(fields[1])
            elif fields and fields[0] == "map":
                qubit_map = tuple(fields[1:])
            continue
        fields = line.split()
        name = fields[0]
        if name == "BARRIER":
            gates.append(Gate("BARRIER", ()))
            continue
        if name in ("RX", "RY", "RZ"):
            gates.append(Gate(name, (int(fields[1]),), float(fields[2])))
        elif name == "CNOT":
            gates.append(Gate(name, (int(fields[1]), int(fields[2]))))
        elif name == "J":
            gates.append(Gate(name, (int(fields[1]), int(fields[2])), float(fields[3])))
        else:
            raise ValueError(f"cannot parse gate line {line!r}")
    if n is None:
        n = 1 + max((max(g.qubits) for g in gates if g.qubits), default=0)
    return Circuit(n, tuple(gates), qubit_map)
