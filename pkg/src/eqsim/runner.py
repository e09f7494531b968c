"""Experiment orchestration: the two entangling-dynamics runs at four levels.

Both experiments start from the all-zeros state.  The two-qubit problem
evolves under omega * XX and tracks the concurrence |sin 2 omega t|; the
three-qubit problem evolves under omega * XXX and tracks the three-tangle
sin^2(2 omega t).  Each time point is evaluated at one of four fidelity
levels:

* ``ideal``   -- exact exponential of the embedded Hamiltonian;
* ``circuit`` -- the simplified gate program;
* ``pulse``   -- shaped pulses synthesized per time point (warm-started
  across the grid) plus shaped readout rotations, simulated on the full
  spin register;
* ``noisy``   -- the compiled hard-pulse sequence applied to a pseudo-pure
  state with T2 dephasing during delays; expectations are polarization
  normalized and every point carries the error bar derived from the
  ideal/noisy discrepancy plus the preparation infidelity.

Level agreement: ideal and circuit coincide to rounding.  The pulse level
tracks the circuit level to order sqrt(1 - F) per expectation value in the
worst case, where F is the smallest synthesized-pulse fidelity: a trace
infidelity of 1 - F admits state-amplitude errors of its square root, and
the shaped evolution and readout pulses each contribute.  Typical
deviations are a few times (1 - F).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sin
from pathlib import Path

import numpy as np

from . import monotones
from .circuits import (
    Circuit,
    build_eqs_circuit,
    circuit_to_unitary,
    plan_readout,
    rotation_word_unitary,
    simplify_for_zero_input,
)
from .embedding import embed_hamiltonian, embed_state, split_hamiltonian
from .errorbars import (
    ErrorBudget,
    concurrence_sigma,
    discrepancy,
    three_tangle_sigma,
)
from .grape import GrapeConvergenceError, OptimizerConfig, optimize, pulse_to_unitary
from .monotones import (
    CONCURRENCE_OBSERVABLES,
    THREE_TANGLE_OBSERVABLES,
    MonotoneResult,
)
from .nmr import (
    NoiseModel,
    ShapedPulse,
    SpinSystem,
    compile_circuit,
    load_molecule,
    measure_fid_observable,
    prepare_pps,
    simulate_sequence,
)
from .qcore import (
    DensityMatrix,
    StateVector,
    apply_unitary,
    embed_operator,
    evolve,
    pauli_matrix,
)

EXPERIMENTS = ("concurrence", "three-tangle")
LEVELS = ("ideal", "circuit", "pulse", "noisy")
PREFERRED_SPIN_ORDER = ("C3", "C4", "C2", "C1")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    level: str = "ideal"
    omega: float = 2 * pi * 25.0
    t_start: float = 0.4e-3
    t_stop: float = 19.6e-3
    t_step: float = 0.8e-3
    molecule: str | None = None
    epsilon: float = 1e-5
    prep_infidelity: float = 0.013
    t2_enabled: bool = True
    seed: int = 0
    out: str | None = None
    # shaped-pulse synthesis knobs (level="pulse")
    pulse_dt: float = 50e-6
    readout_dt: float = 25e-6
    evolution_budget_s: float | None = None  # 15 ms (2q) / 30 ms (3q) when unset
    readout_budget_s: float = 1e-3
    grape_target_fidelity: float = 0.995
    grape_max_iterations: int = 6000
    grape_restarts: int = 2

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"experiment must be one of {EXPERIMENTS}")
        if self.level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}")
        if self.t_step <= 0 or self.t_stop < self.t_start:
            raise ValueError("time grid is empty")


@dataclass(frozen=True)
class TimeSeriesRecord:
    t: float
    expectations: tuple[tuple[str, float], ...]
    sigmas: tuple[float, ...]
    monotone: float
    monotone_sigma: float
    reference: float


def time_grid(cfg: ExperimentConfig) -> np.ndarray:
    count = int(round((cfg.t_stop - cfg.t_start) / cfg.t_step)) + 1
    return cfg.t_start + cfg.t_step * np.arange(count)


@dataclass(frozen=True)
class _Model:
    tag: str
    n_logical: int  # enlarged-space register (ancilla + work qubits)
    word: str       # problem Hamiltonian Pauli word
    observables: tuple[str, ...]
    monotone_name: str


def _model_for(experiment: str) -> _Model:
    if experiment == "concurrence":
        return _Model("2q", 3, "XX", CONCURRENCE_OBSERVABLES, "concurrence")
    return _Model("3q", 4, "XXX", THREE_TANGLE_OBSERVABLES, "three_tangle")


def analytic_reference(experiment: str, omega: float, t: float) -> float:
    if experiment == "concurrence":
        return abs(sin(2 * omega * t))
    return sin(2 * omega * t) ** 2


def _assemble(model: _Model, values: dict, method: str) -> MonotoneResult:
    if model.tag == "2q":
        return monotones.concurrence_from_expectations(
            values["ZYY"], values["XYY"], method
        )
    return monotones.three_tangle_from_expectations(values, method)


def _embedded_state_monotone(model: _Model, big: StateVector) -> MonotoneResult:
    if model.tag == "2q":
        return monotones.concurrence_eqs(big)
    return monotones.three_tangle_eqs(big)


def _register_for(cfg: ExperimentConfig, model: _Model) -> SpinSystem:
    if cfg.molecule is None:
        raise ValueError(f"level {cfg.level!r} requires a molecule config")
    sys = load_molecule(cfg.molecule)
    if sys.n < model.n_logical:
        raise ValueError(
            f"molecule has {sys.n} spins; the {model.tag} program needs {model.n_logical}"
        )
    preferred = PREFERRED_SPIN_ORDER[: sys.n]
    if set(preferred) == set(sys.labels):
        return sys.reordered(preferred)
    return sys  # custom labels: file order is the register order


def _plans(model: _Model, n_spectators: int):
    bits = "0" * n_spectators
    return [plan_readout(word, bits) for word in model.observables]


def _grid_circuits(cfg: ExperimentConfig, model: _Model, times) -> list[Circuit]:
    return [
        simplify_for_zero_input(build_eqs_circuit(model.tag, t, cfg.omega)) for t in times
    ]


def _record(model, t, values, sigma, reference) -> TimeSeriesRecord:
    result = _assemble(model, values, "eqs")
    if sigma == 0.0:
        mono_sigma = 0.0
    elif model.tag == "2q":
        mono_sigma = concurrence_sigma(values["ZYY"], values["XYY"], sigma)
    else:
        mono_sigma = three_tangle_sigma(values, sigma)
    return TimeSeriesRecord(
        float(t),
        result.constituents,
        (sigma,) * len(model.observables),
        result.value,
        mono_sigma,
        reference,
    )


def _ideal_values(cfg: ExperimentConfig, model: _Model, times) -> list[dict]:
    """Exact enlarged-space expectations at every grid time."""
    problem = pauli_matrix(model.word).matrix * cfg.omega
    h_embedded = embed_hamiltonian(split_hamiltonian(problem))
    zero = StateVector.basis(model.n_logical - 1, 0)
    big0 = embed_state(zero)
    out = []
    for t in times:
        big = evolve(big0, h_embedded, float(t))
        result = _embedded_state_monotone(model, big)
        out.append(dict(result.constituents))
    return out


def run_experiment(cfg: ExperimentConfig) -> list[TimeSeriesRecord]:
    """Evaluate the configured experiment on its time grid."""
    model = _model_for(cfg.experiment)
    times = time_grid(cfg)

    if cfg.level == "ideal":
        series = _ideal_values(cfg, model, times)
        return [
            _record(model, t, vals, 0.0, analytic_reference(cfg.experiment, cfg.omega, t))
            for t, vals in zip(times, series)
        ]

    if cfg.level == "circuit":
        records = []
        zero = StateVector.basis(model.n_logical, 0)
        for t, circ in zip(times, _grid_circuits(cfg, model, times)):
            big = apply_unitary(circuit_to_unitary(circ), zero)
            result = _embedded_state_monotone(model, big)
            records.append(
                _record(
                    model, t, dict(result.constituents), 0.0,
                    analytic_reference(cfg.experiment, cfg.omega, t),
                )
            )
        return records

    if cfg.level == "pulse":
        return _run_pulse_level(cfg, model, times)
    return _run_noisy_level(cfg, model, times)


def _child_seeds(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


def _run_pulse_level(cfg, model, times) -> list[TimeSeriesRecord]:
    reg = _register_for(cfg, model)
    n_spect = reg.n - model.n_logical
    plans = _plans(model, n_spect)
    budget = cfg.evolution_budget_s or (15e-3 if model.tag == "2q" else 30e-3)
    seeds = _child_seeds(cfg.seed, len(times) + len(plans) + 8)

    def opt_cfg(seed):
        return OptimizerConfig(
            target_fidelity=cfg.grape_target_fidelity,
            max_iterations=cfg.grape_max_iterations,
            restarts=cfg.grape_restarts,
            seed=seed,
        )

    # shaped readout rotations are time independent: synthesize once per word
    readout_unitaries = {}
    for k, plan in enumerate(plans):
        if plan.rotation_word in readout_unitaries:
            continue
        target = rotation_word_unitary(plan.rotation_word)
        try:
            result = optimize(
                target, reg, cfg.readout_budget_s, opt_cfg(seeds[len(times) + k]),
                dt=cfg.readout_dt,
            )
        except GrapeConvergenceError as exc:
            raise GrapeConvergenceError(
                f"readout word {plan.rotation_word}: {exc}", exc.result
            ) from exc
        readout_unitaries[plan.rotation_word] = pulse_to_unitary(result.pulse, reg)

    zero = DensityMatrix.from_state(StateVector.basis(reg.n, 0))
    records = []
    warm = None
    for i, (t, circ) in enumerate(zip(times, _grid_circuits(cfg, model, times))):
        u_logical = circuit_to_unitary(circ).matrix
        target = embed_operator(u_logical, range(model.n_logical), reg.n)
        try:
            result = optimize(
                target, reg, budget, opt_cfg(seeds[i]), dt=cfg.pulse_dt, init=warm
            )
        except GrapeConvergenceError as exc:
            raise GrapeConvergenceError(f"evolution at t={t}: {exc}", exc.result) from exc
        warm = result.pulse
        rho = simulate_sequence(zero, [ShapedPulse(result.pulse)], reg, None)
        values = {
            plan.target.word: measure_fid_observable(
                rho, plan, rotation=readout_unitaries[plan.rotation_word]
            )
            for plan in plans
        }
        values = {w: min(max(v, -1.0), 1.0) for w, v in values.items()}
        records.append(
            _record(model, t, values, 0.0, analytic_reference(cfg.experiment, cfg.omega, t))
        )
    return records


def _run_noisy_level(cfg, model, times) -> list[TimeSeriesRecord]:
    reg = _register_for(cfg, model)
    n_spect = reg.n - model.n_logical
    plans = _plans(model, n_spect)
    noise = NoiseModel(cfg.epsilon, cfg.prep_infidelity, cfg.t2_enabled)
    rho0 = prepare_pps(cfg.epsilon, cfg.prep_infidelity, n=reg.n)

    noisy_series = []
    for t, circ in zip(times, _grid_circuits(cfg, model, times)):
        seq = compile_circuit(Circuit(circ.n, circ.gates, None), reg)
        rho = simulate_sequence(rho0, seq, reg, noise)
        values = {
            plan.target.word: measure_fid_observable(rho, plan, epsilon=cfg.epsilon)
            for plan in plans
        }
        noisy_series.append(values)

    ideal_series = _ideal_values(cfg, model, times)
    ideal_flat = [vals[w] for vals in ideal_series for w in model.observables]
    noisy_flat = [vals[w] for vals in noisy_series for w in model.observables]
    budget = ErrorBudget(discrepancy(ideal_flat, noisy_flat), cfg.prep_infidelity)
    sigma = budget.sigma

    records = []
    for t, values in zip(times, noisy_series):
        clipped = {w: min(max(v, -1.0), 1.0) for w, v in values.items()}
        records.append(
            _record(
                model, t, clipped, sigma, analytic_reference(cfg.experiment, cfg.omega, t)
            )
        )
    return records


# ---------------------------------------------------------------------------
# output

def emit(records: list[TimeSeriesRecord], path, monotone_name: str | None = None) -> Path:
    """Write the records as CSV with a stable column order.

    Columns: t_s, one column per expectation, one sigma per expectation,
    the monotone and its sigma, then the analytic reference.
    """
    if not records:
        raise ValueError("no records to emit")
    words = [w for w, _ in records[0].expectations]
    if monotone_name is None:
        monotone_name = "concurrence" if len(words) == 2 else "three_tangle"
    header = (
        ["t_s"]
        + [f"exp_{w.lower()}" for w in words]
        + [f"sigma_{w.lower()}" for w in words]
        + [monotone_name, f"{monotone_name}_sigma", "reference"]
    )
    lines = [",".join(header)]
    for rec in records:
        row = [f"{rec.t:.12e}"]
        row += [f"{v:.12e}" for _, v in rec.expectations]
        row += [f"{s:.12e}" for s in rec.sigmas]
        row += [f"{rec.monotone:.12e}", f"{rec.monotone_sigma:.12e}", f"{rec.reference:.12e}"]
        lines.append(",".join(row))
    out = Path(path)
    out.write_text("\n".join(lines) + "\n")
    return out
