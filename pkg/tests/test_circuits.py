import math

import numpy as np
import pytest
from scipy.linalg import expm

from eqsim.circuits import (
    CNOT_MATRIX,
    Circuit,
    Gate,
    ReadoutPlan,
    build_eqs_circuit,
    circuit_to_unitary,
    cnot,
    decompose_cnot,
    decompose_rz,
    gate_unitary,
    parse_circuit,
    plan_observable_matrix,
    plan_readout,
    rotation_word_unitary,
    ry,
    serialize_circuit,
)
from eqsim.qcore import PauliString, StateVector, apply_unitary, trace_fidelity
from helpers import kron_word, random_density

OMEGA = 2 * math.pi * 25.0


def embedded_generator(model: str) -> np.ndarray:
    word = "YXX" if model == "2q" else "YXXX"
    return -OMEGA * kron_word(word)


# ---------------------------------------------------------------------------
# EQS circuits

def test_circuit_gate_counts():
    c2 = build_eqs_circuit("2q", 5e-3, OMEGA)
    assert sum(g.name == "CNOT" for g in c2.gates) == 4
    assert sum(g.name == "RY" for g in c2.gates) == 1
    c3 = build_eqs_circuit("3q", 5e-3, OMEGA)
    assert sum(g.name == "CNOT" for g in c3.gates) == 6
    assert sum(g.name == "RY" for g in c3.gates) == 1


def test_ry_angle_is_minus_2_omega_t():
    t = 3.2e-3
    c = build_eqs_circuit("2q", t, OMEGA)
    angle = next(g.param for g in c.gates if g.name == "RY")
    assert angle == pytest.approx(-2 * OMEGA * t)


@pytest.mark.parametrize("model", ["2q", "3q"])
def test_circuit_matches_exponential_oracle(model):
    rng = np.random.default_rng(17)
    gen = embedded_generator(model)
    for t in rng.uniform(0, 20e-3, size=10):
        u = circuit_to_unitary(build_eqs_circuit(model, t, OMEGA)).matrix
        exact = expm(-1j * gen * t)
        assert np.abs(u - exact).max() < 1e-9


def test_circuit_at_zero_time_is_identity_on_zero_state():
    c = build_eqs_circuit("2q", 0.0, OMEGA)
    out = apply_unitary(circuit_to_unitary(c), StateVector.from_bits("000"))
    assert np.abs(out.amplitudes - StateVector.from_bits("000").amplitudes).max() < 1e-12


def test_unknown_model_rejected():
    with pytest.raises(ValueError):
        build_eqs_circuit("4q", 1e-3, OMEGA)


# ---------------------------------------------------------------------------
# zero-input simplification

def test_simplification_drops_leading_cnots():
    from eqsim.circuits import simplify_for_zero_input

    c2 = simplify_for_zero_input(build_eqs_circuit("2q", 5e-3, OMEGA))
    assert sum(g.name == "CNOT" for g in c2.gates) == 2
    assert c2.gates[0].name == "RY"
    c3 = simplify_for_zero_input(build_eqs_circuit("3q", 5e-3, OMEGA))
    assert sum(g.name == "CNOT" for g in c3.gates) == 3


@pytest.mark.parametrize("model", ["2q", "3q"])
def test_simplified_circuit_agrees_on_zero_state(model):
    from eqsim.circuits import simplify_for_zero_input

    full = build_eqs_circuit(model, 7.7e-3, OMEGA)
    simplified = simplify_for_zero_input(full)
    zero = StateVector.basis(full.n, 0)
    a = apply_unitary(circuit_to_unitary(full), zero).amplitudes
    b = apply_unitary(circuit_to_unitary(simplified), zero).amplitudes
    assert np.abs(a - b).max() < 1e-12


def test_simplify_empty_circuit():
    from eqsim.circuits import simplify_for_zero_input

    empty = Circuit(2, ())
    assert simplify_for_zero_input(empty).gates == ()


# ---------------------------------------------------------------------------
# CNOT decomposition

def test_decompose_cnot_five_elements_and_fidelity():
    dec = decompose_cnot(0, 1, 72.0)
    assert len(dec.gates) == 5
    u = circuit_to_unitary(dec, {(0, 1): 72.0}).matrix
    assert trace_fidelity(u, CNOT_MATRIX) >= 1 - 1e-10


def test_decompose_cnot_reversed_orientation():
    dec = decompose_cnot(1, 0, 41.6)
    u = circuit_to_unitary(dec, {(0, 1): 41.6}).matrix
    target = kron_word("II").copy()
    target[1, 1] = 0
    target[3, 3] = 0
    target[1, 3] = target[3, 1] = 1  # CNOT with control on qubit 1
    assert trace_fidelity(u, target) >= 1 - 1e-10


def test_decompose_cnot_double_application_is_identity():
    dec = decompose_cnot(0, 1, 50.0)
    u = circuit_to_unitary(dec, {(0, 1): 50.0}).matrix
    assert trace_fidelity(u @ u, np.eye(4)) >= 1 - 1e-10


def test_decompose_cnot_rejects_same_qubit():
    with pytest.raises(ValueError):
        decompose_cnot(1, 1, 72.0)


def test_j_gate_duration_is_half_inverse_coupling():
    dec = decompose_cnot(0, 1, 72.0)
    jg = next(g for g in dec.gates if g.name == "J")
    assert jg.param == pytest.approx(1 / 144.0)


def test_rz_decomposition_identity():
    theta = 1.234
    product = np.eye(2, dtype=complex)
    for g in decompose_rz(0, theta):
        product = gate_unitary(g, 1) @ product
    rz_direct = expm(-1j * theta * kron_word("Z") / 2)
    assert np.abs(product - rz_direct).max() < 1e-12


# ---------------------------------------------------------------------------
# circuit_to_unitary details

def test_single_cnot_is_permutation_block():
    u = circuit_to_unitary(Circuit(2, (cnot(0, 1),))).matrix
    assert np.allclose(u, CNOT_MATRIX)


def test_gates_then_inverse_gates():
    c = Circuit(2, (ry(0, 0.4), cnot(0, 1), cnot(0, 1), ry(0, -0.4)))
    assert np.abs(circuit_to_unitary(c).matrix - np.eye(4)).max() < 1e-12


def test_j_gate_requires_coupling_table():
    c = Circuit(2, (Gate("J", (0, 1), 0.005),))
    with pytest.raises(ValueError):
        circuit_to_unitary(c)


# ---------------------------------------------------------------------------
# readout plans

ALL_TARGETS = [
    ("ZYY", "0"),
    ("XYY", "0"),
    ("XIYY", ""),
    ("XZYY", ""),
    ("ZIYY", ""),
    ("ZZYY", ""),
    ("ZXYY", ""),
    ("XXYY", ""),
]


@pytest.mark.parametrize("word,spectator", ALL_TARGETS)
def test_readout_plan_transports_expectations(word, spectator):
    plan = plan_readout(word, spectator)
    rng = np.random.default_rng(hash(word) % 2**32)
    rmat = rotation_word_unitary(plan.rotation_word).matrix
    target = plan_observable_matrix(plan, "target")
    measured = plan_observable_matrix(plan, "measured")
    n = plan.n
    for _ in range(20):
        rho = random_density(rng, n)
        lhs = np.trace(rho @ target).real
        rotated = rmat @ rho @ rmat.conj().T
        rhs = plan.sign * np.trace(rotated @ measured).real
        assert abs(lhs - rhs) < 1e-10


def test_expected_rotation_words():
    assert plan_readout("ZYY", "0").rotation_word == "YXXI"
    assert plan_readout("XYY", "0").rotation_word == "IXXI"
    assert plan_readout("ZXYY").rotation_word == "YBXX"
    assert plan_readout("XXYY").rotation_word == "IBXX"
    assert plan_readout("ZIYY").measured.word == "XIZZ"
    assert plan_readout("ZZYY").measured.word == "XZZZ"


def test_unsupported_readout_target():
    with pytest.raises(ValueError):
        plan_readout("ZZZ")


def test_readout_plan_rejects_undetectable_form():
    with pytest.raises(ValueError):
        ReadoutPlan(PauliString("ZYY"), "III", PauliString("ZZZ"))


# ---------------------------------------------------------------------------
# serialization

def test_serialize_parse_round_trip():
    c = Circuit(
        3,
        (cnot(0, 1), ry(0, -math.pi / 4), Gate("J", (1, 2), 1 / 144.0), Gate("BARRIER", ())),
        ("C3", "C4", "C2"),
    )
    text = serialize_circuit(c)
    back = parse_circuit(text)
    assert back.n == c.n
    assert back.qubit_map == c.qubit_map
    assert back.gates == c.gates


def test_serialized_format_lines():
    c = Circuit(2, (cnot(0, 1), ry(0, -math.pi / 4)))
    lines = serialize_circuit(c).splitlines()
    assert lines[1] == "CNOT 0 1"
    assert lines[2].startswith("RY 0 -0.785398163")


def test_golden_circuit_file():
    from pathlib import Path

    from eqsim.circuits import simplify_for_zero_input

    golden = Path(__file__).parent / "golden" / "eqs_circuit_2q_t6800us.txt"
    circuit = simplify_for_zero_input(build_eqs_circuit("2q", 6.8e-3, OMEGA))
    assert serialize_circuit(circuit) == golden.read_text()
    assert parse_circuit(golden.read_text()).gates == circuit.gates
