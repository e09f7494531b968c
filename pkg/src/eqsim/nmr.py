"""Pulse-level simulation of a small homonuclear spin register.

The internal Hamiltonian in the rotating frame at the reference frequency is

    H_int = sum_j pi (nu_j - nu_0) sigma_z^j
          + sum_{j<k} (pi/2) J_jk sigma_z^j sigma_z^k     [rad/s]

which is diagonal, so free evolution and the per-spin T2 phase-damping
channel commute exactly and delays need no splitting.  Hard pulses are
instantaneous ideal rotations; finite-duration effects enter only through
shaped pulses (see :mod:`eqsim.grape`), where the dephasing channel is
interleaved per segment.

Molecule parameters load from a JSON config.  The repository ships a
clearly labeled synthetic default at typical carbon-13 magnitudes; no values
are claimed to describe a real molecule.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circuits import (
    Circuit,
    Gate,
    ReadoutPlan,
    decompose_cnot,
    decompose_rz,
    plan_observable_matrix,
    rotation_word_unitary,
)
from .qcore import (
    PAULI,
    DensityMatrix,
    HermitianOperator,
    embed_operator,
    operator_array,
)

PULSE_AXES = ("x", "-x", "y", "-y")


@dataclass(frozen=True)
class SpinSystem:
    """Chemical shifts, J couplings and T2 times of a labeled spin register."""

    labels: tuple[str, ...]
    shifts_hz: tuple[float, ...]
    reference_hz: float
    j_hz: np.ndarray
    t2_s: tuple[float, ...]

    def __post_init__(self):
        n = len(self.labels)
        j = np.array(self.j_hz, dtype=float)
        if len(set(self.labels)) != n:
            raise ValueError("spin labels must be unique")
        if len(self.shifts_hz) != n or len(self.t2_s) != n:
            raise ValueError("shifts and T2 lists must match the label count")
        if j.shape != (n, n) or np.abs(j - j.T).max() > 0 or np.abs(np.diag(j)).max() > 0:
            raise ValueError("J matrix must be symmetric with zero diagonal")
        if any(t <= 0 for t in self.t2_s):
            raise ValueError("T2 times must be positive")
        if not all(math.isfinite(s) for s in self.shifts_hz):
            raise ValueError("shifts must be finite")
        j.flags.writeable = False
        object.__setattr__(self, "j_hz", j)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "shifts_hz", tuple(float(s) for s in self.shifts_hz))
        object.__setattr__(self, "t2_s", tuple(float(t) for t in self.t2_s))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def offsets_hz(self) -> tuple[float, ...]:
        return tuple(s - self.reference_hz for s in self.shifts_hz)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown spin {label!r}; have {self.labels}") from None

    def j_between(self, a: int, b: int) -> float:
        return float(self.j_hz[a, b])

    def subsystem(self, labels) -> "SpinSystem":
        idx = [self.index(lb) for lb in labels]
        return SpinSystem(
            tuple(labels),
            tuple(self.shifts_hz[i] for i in idx),
            self.reference_hz,
            self.j_hz[np.ix_(idx, idx)],
            tuple(self.t2_s[i] for i in idx),
        )

    def reordered(self, labels) -> "SpinSystem":
        if set(labels) != set(self.labels):
            raise ValueError("reordering must use exactly the existing labels")
        return self.subsystem(labels)


def load_molecule(path) -> SpinSystem:
    """Read a molecule config (JSON) into a :class:`SpinSystem`.

    Expected fields: ``spins``, ``shifts_hz``, ``reference_hz``,
    ``j_couplings_hz`` (upper triangle keyed "A-B"), ``t2_s``.
    """
    raw = json.loads(Path(path).read_text())
    labels = tuple(raw["spins"])
    n = len(labels)
    j = np.zeros((n, n))
    for key, value in raw["j_couplings_hz"].items():
        a, _, b = key.partition("-")
        ia, ib = labels.index(a), labels.index(b)
        if ia == ib:
            raise ValueError(f"self-coupling {key!r}")
        j[ia, ib] = j[ib, ia] = float(value)
    return SpinSystem(
        labels,
        tuple(float(s) for s in raw["shifts_hz"]),
        float(raw["reference_hz"]),
        j,
        tuple(float(t) for t in raw["t2_s"]),
    )


@dataclass(frozen=True)
class NoiseModel:
    """Polarization, preparation infidelity and the T2 dephasing switch."""

    polarization: float = 1e-5
    pps_infidelity: float = 0.0
    t2_dephasing: bool = True

    def __post_init__(self):
        if not 0 < self.polarization <= 1:
            raise ValueError(f"polarization must be in (0, 1], got {self.polarization}")
        if not 0 <= self.pps_infidelity < 1:
            raise ValueError(f"infidelity must be in [0, 1), got {self.pps_infidelity}")


# ---------------------------------------------------------------------------
# pulse segments

@dataclass(frozen=True)
class HardPulse:
    """Instantaneous rotation of the listed spins around a transverse axis."""

    spins: tuple[int, ...]
    axis: str
    angle: float

    def __post_init__(self):
        if self.axis not in PULSE_AXES:
            raise ValueError(f"axis must be one of {PULSE_AXES}, got {self.axis!r}")
        if not abs(self.angle) < 2 * math.pi:
            raise ValueError(f"flip angle must satisfy |angle| < 2pi, got {self.angle}")
        if len(set(self.spins)) != len(self.spins):
            raise ValueError("repeated spin in hard pulse")
        object.__setattr__(self, "spins", tuple(self.spins))


@dataclass(frozen=True)
class Delay:
    tau: float

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError(f"delay must be non-negative, got {self.tau}")


@dataclass(frozen=True)
class ShapedPulse:
    """Reference to a piecewise-constant control pulse (see eqsim.grape)."""

    pulse: object  # ControlPulse; typed loosely to avoid a circular import


PulseSegment = HardPulse | Delay | ShapedPulse


def internal_hamiltonian(sys: SpinSystem) -> HermitianOperator:
    """Diagonal rotating-frame Hamiltonian of the register, rad/s."""
    n = sys.n
    dim = 2**n
    # sigma_z eigenvalue per qubit and basis index: +1 for bit 0, -1 for bit 1
    zvals = np.empty((n, dim))
    idx = np.arange(dim)
    for q in range(n):
        bit = (idx >> (n - 1 - q)) & 1
        zvals[q] = 1.0 - 2.0 * bit
    diag = np.zeros(dim)
    for q, off in enumerate(sys.offsets_hz):
        diag += math.pi * off * zvals[q]
    for a in range(n):
        for b in range(a + 1, n):
            jab = sys.j_hz[a, b]
            if jab:
                diag += math.pi / 2 * jab * zvals[a] * zvals[b]
    return HermitianOperator(np.diag(diag.astype(complex)))


def _axis_rotation(axis: str, angle: float) -> np.ndarray:
    sign = -1.0 if axis.startswith("-") else 1.0
    gen = PAULI[axis[-1].upper()]
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * sign * gen


def hard_pulse_unitary(pulse: HardPulse, n: int) -> np.ndarray:
    u = np.eye(2**n, dtype=complex)
    r = _axis_rotation(pulse.axis, pulse.angle)
    for s in pulse.spins:
        u = embed_operator(r, [s], n) @ u
    return u


def _dephasing_factors(sys: SpinSystem, tau: float) -> np.ndarray:
    """Element-wise damping matrix: coherences of spin j decay as exp(-tau/T2_j)."""
    dim = 2**sys.n
    idx = np.arange(dim)
    factors = np.ones((dim, dim))
    for q, t2 in enumerate(sys.t2_s):
        bit = (idx >> (sys.n - 1 - q)) & 1
        differ = bit[:, None] != bit[None, :]
        factors *= np.where(differ, math.exp(-tau / t2), 1.0)
    return factors


def simulate_sequence(
    rho: DensityMatrix,
    seq,
    sys: SpinSystem,
    noise: NoiseModel | None = None,
) -> DensityMatrix:
    """Propagate a density matrix through a pulse sequence.

    Free evolution under the diagonal internal Hamiltonian alternates with
    instantaneous hard pulses.  With T2 noise enabled, each delay also
    applies the per-spin phase-damping channel; because both act
    element-wise in the computational basis this is exact, not Trotterized.
    Shaped pulses interleave the channel per segment.
    """
    mat = np.array(operator_array(rho))
    hdiag = np.diag(internal_hamiltonian(sys).matrix).copy()
    dephase = noise is not None and noise.t2_dephasing
    for segment in seq:
        if isinstance(segment, Delay):
            phases = np.exp(-1j * hdiag * segment.tau)
            mat = (phases[:, None] * mat) * phases.conj()[None, :]
            if dephase and segment.tau > 0:
                mat = mat * _dephasing_factors(sys, segment.tau)
        elif isinstance(segment, HardPulse):
            u = hard_pulse_unitary(segment, sys.n)
            mat = u @ mat @ u.conj().T
        elif isinstance(segment, ShapedPulse):
            from .grape import segment_propagators  # local import; grape depends on nmr

            pulse = segment.pulse
            for u in segment_propagators(pulse, sys):
                mat = u @ mat @ u.conj().T
                if dephase:
                    mat = mat * _dephasing_factors(sys, pulse.dt)
        else:
            raise ValueError(f"unknown pulse segment {segment!r}")
    return DensityMatrix(mat)


# ---------------------------------------------------------------------------
# refocused coupling evolution

def _hadamard_rows(m: int) -> np.ndarray:
    h = np.array([[1]])
    while h.shape[0] < m:
        h = np.block([[h, h], [h, -h]])
    return h


def refocused_jcoupling(a: int, b: int, sys: SpinSystem) -> list:
    """Delay/pi-pulse pattern selecting the (a, b) coupling.

    Spins a and b share the alternating Walsh pattern while every other
    spin gets a distinct orthogonal one, so all shifts and all other
    couplings integrate to zero over the total delay 1/(2 J_ab); the net
    action is exp(-i pi sigma_z^a sigma_z^b / 4) up to a global phase.  A
    negative coupling is handled by sandwiching the block between pi pulses
    on spin b, which reverses the effective coupling sign.
    """
    if a == b:
        raise ValueError("coupling requires two distinct spins")
    jab = sys.j_hz[a, b]
    if jab == 0:
        raise ValueError(f"spins {a},{b} are uncoupled; the delay would be infinite")
    if jab < 0:
        flip = HardPulse((b,), "x", math.pi)
        return [flip] + refocused_jcoupling(a, b, _with_flipped_j(sys, a, b)) + [flip]
    tau = 1.0 / (2.0 * abs(jab))
    n = sys.n
    m = 2 ** math.ceil(math.log2(max(n, 2)))
    rows = _hadamard_rows(m)
    assign = {a: 1, b: 1}
    nxt = 2
    for s in range(n):
        if s not in (a, b):
            assign[s] = nxt
            nxt += 1
    segments: list = []
    for i in range(m):
        segments.append(Delay(tau / m))
        if i < m - 1:
            flips = tuple(s for s in range(n) if rows[assign[s], i + 1] != rows[assign[s], i])
        else:
            flips = tuple(s for s in range(n) if rows[assign[s], m - 1] == -1)
        if flips:
            segments.append(HardPulse(flips, "x", math.pi))
    return segments


def _with_flipped_j(sys: SpinSystem, a: int, b: int) -> SpinSystem:
    j = np.array(sys.j_hz)
    j[a, b] = j[b, a] = -j[a, b]
    return SpinSystem(sys.labels, sys.shifts_hz, sys.reference_hz, j, sys.t2_s)


def compile_circuit(circuit: Circuit, sys: SpinSystem) -> list:
    """Translate a gate circuit into hard pulses and refocused delays.

    CNOTs expand through the rotation/coupling decomposition; z rotations
    reduce to x/y pulses.  When the circuit carries a qubit map, gate
    positions are translated onto the named spins of ``sys``.
    """
    if circuit.qubit_map is not None:
        pos = [sys.index(lb) for lb in circuit.qubit_map]
    else:
        if circuit.n > sys.n:
            raise ValueError("circuit does not fit the spin register")
        pos = list(range(circuit.n))

    def emit(gate: Gate, out: list):
        if gate.name == "BARRIER":
            return
        if gate.name == "RX":
            out.append(HardPulse((pos[gate.qubits[0]],), "x", _wrap(gate.param)))
        elif gate.name == "RY":
            out.append(HardPulse((pos[gate.qubits[0]],), "y", _wrap(gate.param)))
        elif gate.name == "RZ":
            for sub in decompose_rz(gate.qubits[0], gate.param):
                emit(sub, out)
        elif gate.name == "J":
            out.extend(refocused_jcoupling(pos[gate.qubits[0]], pos[gate.qubits[1]], sys))
        elif gate.name == "CNOT":
            c, t = gate.qubits
            jab = sys.j_hz[pos[c], pos[t]]
            inner = decompose_cnot(c, t, abs(jab) if jab else 0.0)
            for sub in inner.gates:
                emit(sub, out)
        else:
            raise ValueError(f"cannot compile gate {gate.name!r}")

    segments: list = []
    for gate in circuit.gates:
        emit(gate, segments)
    return segments


def _wrap(angle: float) -> float:
    wrapped = math.remainder(angle, 4 * math.pi)
    if abs(wrapped) >= 2 * math.pi:  # remainder may return the +-2pi endpoint
        wrapped = math.copysign(2 * math.pi - abs(wrapped), wrapped)
    return wrapped


# ---------------------------------------------------------------------------
# initial states

def thermal_state(sys: SpinSystem, epsilon: float) -> DensityMatrix:
    """Maximally mixed background plus epsilon times the sum of sigma_z's."""
    if not 0 <= epsilon <= 1:
        raise ValueError(f"polarization must be in [0, 1], got {epsilon}")
    n = sys.n
    dim = 2**n
    mat = np.eye(dim, dtype=complex) / dim
    for q in range(n):
        mat += epsilon * embed_operator(PAULI["Z"], [q], n)
    return DensityMatrix(mat)  # PSD assertion happens in the constructor


def prepare_pps(
    epsilon: float, infidelity: float = 0.0, n: int = 4
) -> DensityMatrix:
    """Pseudo-pure state (1-eps)/2^n * I + eps * deviation.

    With zero ``infidelity`` the deviation is exactly |0...0><0...0|.  A
    preparation error mixes the deviation isotropically with the orthogonal
    complement, so its fidelity to the target is exactly 1 - infidelity.
    """
    if not 0 < epsilon <= 1:
        raise ValueError(f"polarization must be in (0, 1], got {epsilon}")
    if not 0 <= infidelity < 1:
        raise ValueError(f"infidelity must be in [0, 1), got {infidelity}")
    dim = 2**n
    pure = np.zeros((dim, dim), dtype=complex)
    pure[0, 0] = 1.0
    dev = (1 - infidelity) * pure + infidelity * (np.eye(dim) - pure) / (dim - 1)
    mat = (1 - epsilon) / dim * np.eye(dim, dtype=complex) + epsilon * dev
    return DensityMatrix(mat)


# ---------------------------------------------------------------------------
# measurement

def measure_fid_observable(
    rho: DensityMatrix,
    plan: ReadoutPlan,
    *,
    epsilon: float | None = None,
    rotation=None,
) -> float:
    """Apply a readout plan and return the target expectation value.

    The plan's rotation word is applied to the state (``rotation`` overrides
    it with an explicit unitary, e.g. a shaped-pulse realization), the
    detectable observable is evaluated and the plan sign restores the target
    convention.  For pseudo-pure inputs pass ``epsilon`` to report the
    polarization-normalized value.
    """
    mat = operator_array(rho)
    if rotation is None:
        rmat = rotation_word_unitary(plan.rotation_word).matrix
    else:
        rmat = operator_array(rotation)
    if rmat.shape != mat.shape:
        raise ValueError("rotation does not match the register size")
    measured = plan_observable_matrix(plan, "measured")
    rotated = rmat @ mat @ rmat.conj().T
    value = plan.sign * float(np.trace(rotated @ measured).real)
    if epsilon is not None:
        value /= epsilon
    return value


# ---------------------------------------------------------------------------
# sequence serialization: line-oriented text for golden tests

def serialize_sequence(seq) -> str:
    lines = []
    for segment in seq:
        if isinstance(segment, HardPulse):
            spins = ",".join(str(s) for s in segment.spins)
            lines.append(f"PULSE {spins} {segment.axis} {float(segment.angle)!r}")
        elif isinstance(segment, Delay):
            lines.append(f"DELAY {float(segment.tau)!r}")
        elif isinstance(segment, ShapedPulse):
            pulse = segment.pulse
            lines.append(f"SHAPED {pulse.n_segments} {float(pulse.dt)!r}")
            for x, y in pulse.amplitudes:
                lines.append(f"A {float(x)!r} {float(y)!r}")
        else:
            raise ValueError(f"cannot serialize segment {segment!r}")
    return "\n".join(lines) + "\n"


def parse_sequence(text: str):
    from .grape import ControlPulse

    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    seq: list = []
    i = 0
    while i < len(lines):
        fields = lines[i].split()
        kind = fields[0]
        if kind == "PULSE":
            spins = tuple(int(s) for s in fields[1].split(","))
            seq.append(HardPulse(spins, fields[2], float(fields[3])))
            i += 1
        elif kind == "DELAY":
            seq.append(Delay(float(fields[1])))
            i += 1
        elif kind == "SHAPED":
            count, dt = int(fields[1]), float(fields[2])
            amps = []
            for k in range(count):
                af = lines[i + 1 + k].split()
                if af[0] != "A":
                    raise ValueError("shaped pulse amplitude lines are malformed")
                amps.append((float(af[1]), float(af[2])))
            seq.append(ShapedPulse(ControlPulse(dt, np.array(amps))))
            i += 1 + count
        else:
            raise ValueError(f"cannot parse sequence line {lines[i]!r}")
    return seq
