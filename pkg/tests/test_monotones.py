import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eqsim.embedding import embed_hamiltonian, embed_state, split_hamiltonian
from eqsim.monotones import (
    CONCURRENCE_OBSERVABLES,
    THREE_TANGLE_OBSERVABLES,
    MonotoneResult,
    concurrence_direct,
    concurrence_eqs,
    concurrence_from_expectations,
    three_tangle_direct,
    three_tangle_eqs,
    three_tangle_from_expectations,
)
from eqsim.qcore import StateVector, evolve
from helpers import (
    antilinear_bracket,
    kron_word,
    random_product_state,
    random_state,
)

seeds = st.integers(0, 2**32 - 1)
OMEGA = 2 * math.pi * 25.0
GRID = [0.4e-3 + 0.8e-3 * k for k in range(25)]

BELL = StateVector(np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))
GHZ = StateVector(np.array([1, 0, 0, 0, 0, 0, 0, 1], dtype=complex) / math.sqrt(2))
W = StateVector(np.array([0, 1, 1, 0, 1, 0, 0, 0], dtype=complex) / math.sqrt(3))


def brute_force_concurrence(psi: np.ndarray) -> float:
    return abs(antilinear_bracket(psi, kron_word("YY")))


def brute_force_three_tangle(psi: np.ndarray) -> float:
    q1 = antilinear_bracket(psi, kron_word("IYY"))
    q2 = antilinear_bracket(psi, kron_word("XYY"))
    q3 = antilinear_bracket(psi, kron_word("ZYY"))
    return abs(-q1 * q1 + q2 * q2 + q3 * q3)


# ---------------------------------------------------------------------------
# concurrence

def test_concurrence_product_state():
    assert concurrence_direct(StateVector.from_bits("00")).value == pytest.approx(0.0)


def test_concurrence_bell_against_brute_force():
    oracle = brute_force_concurrence(BELL.amplitudes)
    assert oracle == pytest.approx(1.0)
    assert concurrence_direct(BELL).value == pytest.approx(oracle)
    assert concurrence_eqs(embed_state(BELL)).value == pytest.approx(oracle)


def test_concurrence_of_evolved_state_is_sin_2wt():
    h2 = OMEGA * kron_word("XX")
    for t in GRID:
        phi = evolve(StateVector.from_bits("00"), h2, t)
        assert concurrence_direct(phi).value == pytest.approx(
            abs(math.sin(2 * OMEGA * t)), abs=1e-10
        )


def test_concurrence_eqs_constituents_over_grid():
    h2 = OMEGA * kron_word("XX")
    embedded_h = embed_hamiltonian(split_hamiltonian(h2))
    big0 = StateVector.from_bits("000")
    for t in GRID:
        big = evolve(big0, embedded_h, t)
        result = concurrence_eqs(big)
        phi = evolve(StateVector.from_bits("00"), h2, t)
        assert result.value == pytest.approx(concurrence_direct(phi).value, abs=1e-10)
        values = dict(result.constituents)
        assert values["ZYY"] == pytest.approx(0.0, abs=1e-10)
        assert values["XYY"] == pytest.approx(math.sin(2 * OMEGA * t), abs=1e-10)


def test_concurrence_eqs_trivial():
    assert concurrence_eqs(StateVector.from_bits("000")).value == pytest.approx(0.0)


def test_concurrence_wrong_size():
    with pytest.raises(ValueError):
        concurrence_direct(StateVector.from_bits("000"))
    with pytest.raises(ValueError):
        concurrence_eqs(StateVector.from_bits("00"))


def test_concurrence_from_expectations_assembly():
    result = concurrence_from_expectations(0.0, 0.6)
    assert result.value == pytest.approx(0.6)
    assert result.constituents == (("ZYY", 0.0), ("XYY", 0.6))


# ---------------------------------------------------------------------------
# three-tangle

def test_three_tangle_product_state():
    assert three_tangle_direct(StateVector.from_bits("000")).value == pytest.approx(0.0)


def test_three_tangle_ghz_against_brute_force():
    oracle = brute_force_three_tangle(GHZ.amplitudes)
    assert oracle == pytest.approx(1.0)
    assert three_tangle_direct(GHZ).value == pytest.approx(oracle)
    assert three_tangle_eqs(embed_state(GHZ)).value == pytest.approx(oracle)


def test_three_tangle_w_state_is_zero():
    oracle = brute_force_three_tangle(W.amplitudes)
    assert oracle == pytest.approx(0.0, abs=1e-12)
    assert three_tangle_direct(W).value == pytest.approx(0.0, abs=1e-12)


def test_three_tangle_eqs_over_grid():
    h3 = OMEGA * kron_word("XXX")
    embedded_h = embed_hamiltonian(split_hamiltonian(h3))
    big0 = StateVector.from_bits("0000")
    for t in GRID:
        big = evolve(big0, embedded_h, t)
        result = three_tangle_eqs(big)
        phi = evolve(StateVector.from_bits("000"), h3, t)
        assert result.value == pytest.approx(three_tangle_direct(phi).value, abs=1e-10)
        assert result.value == pytest.approx(math.sin(2 * OMEGA * t) ** 2, abs=1e-9)


def test_three_tangle_eqs_trivial():
    assert three_tangle_eqs(StateVector.from_bits("0000")).value == pytest.approx(0.0)


def test_three_tangle_wrong_size():
    with pytest.raises(ValueError):
        three_tangle_direct(StateVector.from_bits("00"))
    with pytest.raises(ValueError):
        three_tangle_eqs(StateVector.from_bits("000"))


def test_three_tangle_from_expectations_requires_all_six():
    with pytest.raises(ValueError):
        three_tangle_from_expectations({"ZIYY": 0.0})


# ---------------------------------------------------------------------------
# shared properties

@given(seeds)
def test_eqs_matches_direct_on_random_states(seed):
    rng = np.random.default_rng(seed)
    phi2 = StateVector(random_state(rng, 2))
    assert abs(
        concurrence_eqs(embed_state(phi2)).value - concurrence_direct(phi2).value
    ) < 1e-10
    phi3 = StateVector(random_state(rng, 3))
    assert abs(
        three_tangle_eqs(embed_state(phi3)).value - three_tangle_direct(phi3).value
    ) < 1e-10


@given(seeds)
def test_monotone_range(seed):
    rng = np.random.default_rng(seed)
    assert 0.0 <= concurrence_direct(StateVector(random_state(rng, 2))).value <= 1 + 1e-10
    assert 0.0 <= three_tangle_direct(StateVector(random_state(rng, 3))).value <= 1 + 1e-10


@given(seeds)
def test_separable_states_score_zero(seed):
    rng = np.random.default_rng(seed)
    assert concurrence_direct(
        StateVector(random_product_state(rng, 2))
    ).value < 1e-10
    assert three_tangle_direct(
        StateVector(random_product_state(rng, 3))
    ).value < 1e-10


@given(seeds)
def test_local_unitary_invariance_of_concurrence(seed):
    rng = np.random.default_rng(seed)
    phi = random_state(rng, 2)
    u = np.eye(1, dtype=complex)
    for _ in range(2):
        block = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, _ = np.linalg.qr(block)
        u = np.kron(u, q)
    rotated = StateVector(u @ phi)
    assert concurrence_direct(rotated).value == pytest.approx(
        concurrence_direct(StateVector(phi)).value, abs=1e-9
    )


def test_constituent_counts():
    assert len(CONCURRENCE_OBSERVABLES) == 2
    assert len(THREE_TANGLE_OBSERVABLES) == 6
    assert len(concurrence_eqs(StateVector.from_bits("000")).constituents) == 2
    assert len(three_tangle_eqs(StateVector.from_bits("0000")).constituents) == 6


def test_monotone_result_range_validation():
    with pytest.raises(ValueError):
        MonotoneResult(1.5, (), "direct")
