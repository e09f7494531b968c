"""Command-line front end.

Subcommands:

* ``run``        -- evaluate an experiment over its time grid and write CSV;
* ``grape``      -- synthesize a shaped pulse for a named target;
* ``tomography`` -- reconstruct a prepared state by full tomography.

Any violated contract (missing config, non-convergence, bad arguments)
terminates with a nonzero exit code and a message on stderr.
"""

from __future__ import annotations

import argparse
import sys
from math import pi

import numpy as np

from .circuits import CNOT_MATRIX, rotation_word_unitary
from .grape import OptimizerConfig, export_pulse, optimize
from .nmr import load_molecule, prepare_pps
from .qcore import StateVector
from .runner import EXPERIMENTS, LEVELS, ExperimentConfig, emit, run_experiment
from .tomography import (
    export_expectations,
    full_state_tomography,
    pps_deviation_fidelity,
    state_fidelity,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqsim")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment over the time grid")
    p_run.add_argument("--experiment", required=True, choices=EXPERIMENTS)
    p_run.add_argument("--level", default="ideal", choices=LEVELS)
    p_run.add_argument("--config", default=None, help="molecule config (JSON)")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--omega-hz", type=float, default=25.0)
    p_run.add_argument("--epsilon", type=float, default=1e-5)
    p_run.add_argument("--prep-infidelity", type=float, default=0.013)
    p_run.add_argument("--grid", nargs=3, type=float, metavar=("START", "STOP", "STEP"),
                       default=[0.4e-3, 19.6e-3, 0.8e-3], help="time grid in seconds")
    p_run.add_argument("--target-fidelity", type=float, default=0.995,
                       help="shaped-pulse goal at level=pulse")

    p_grape = sub.add_parser("grape", help="synthesize a shaped pulse")
    p_grape.add_argument("--target", required=True,
                         help="cnot, identity, or a rotation word over I/X/Y/B")
    p_grape.add_argument("--budget-ms", type=float, required=True)
    p_grape.add_argument("--config", required=True)
    p_grape.add_argument("--spins", default=None,
                         help="comma-separated spin labels (default: cnot uses C3,C4)")
    p_grape.add_argument("--dt-us", type=float, default=50.0)
    p_grape.add_argument("--seed", type=int, default=0)
    p_grape.add_argument("--target-fidelity", type=float, default=0.995)
    p_grape.add_argument("--max-iterations", type=int, default=6000)
    p_grape.add_argument("--restarts", type=int, default=3)
    p_grape.add_argument("--out", default=None, help="pulse file to write")

    p_tomo = sub.add_parser("tomography", help="full-state tomography of a prepared state")
    p_tomo.add_argument("--state", required=True, choices=["pps"])
    p_tomo.add_argument("--epsilon", type=float, default=1e-5)
    p_tomo.add_argument("--prep-infidelity", type=float, default=0.0)
    p_tomo.add_argument("--qubits", type=int, default=4)
    p_tomo.add_argument("--noise-sigma", type=float, default=0.0)
    p_tomo.add_argument("--seed", type=int, default=0)
    p_tomo.add_argument("--out", default=None, help="expectation list to write")
    return parser


def _cmd_run(args) -> int:
    cfg = ExperimentConfig(
        experiment=args.experiment,
        level=args.level,
        omega=2 * pi * args.omega_hz,
        t_start=args.grid[0],
        t_stop=args.grid[1],
        t_step=args.grid[2],
        molecule=args.config,
        epsilon=args.epsilon,
        prep_infidelity=args.prep_infidelity,
        seed=args.seed,
        out=args.out,
        grape_target_fidelity=args.target_fidelity,
    )
    records = run_experiment(cfg)
    path = emit(records, args.out)
    print(f"wrote {len(records)} records to {path}")
    return 0


def _grape_problem(args):
    sys_full = load_molecule(args.config)
    name = args.target.lower()
    if name == "cnot":
        labels = args.spins.split(",") if args.spins else ["C3", "C4"]
        reg = sys_full.subsystem(labels)
        return reg, CNOT_MATRIX, f"cnot({labels[0]}->{labels[1]})"
    if args.spins:
        reg = sys_full.subsystem(args.spins.split(","))
    else:
        reg = sys_full
    if name == "identity":
        return reg, np.eye(2**reg.n, dtype=complex), "identity"
    word = args.target.upper()
    if len(word) != reg.n:
        raise ValueError(f"rotation word {word!r} does not match {reg.n} spins")
    return reg, rotation_word_unitary(word), f"rotation {word}"


def _cmd_grape(args) -> int:
    reg, target, label = _grape_problem(args)
    cfg = OptimizerConfig(
        target_fidelity=args.target_fidelity,
        max_iterations=args.max_iterations,
        restarts=args.restarts,
        seed=args.seed,
    )
    result = optimize(target, reg, args.budget_ms * 1e-3, cfg, dt=args.dt_us * 1e-6)
    print(
        f"target {label}: fidelity {result.fidelity:.6f} after "
        f"{result.iterations} iterations ({result.restarts_used} restart(s))"
    )
    if args.out:
        export_pulse(result.pulse, args.out)
        print(f"wrote pulse to {args.out}")
    return 0


def _cmd_tomography(args) -> int:
    rho = prepare_pps(args.epsilon, args.prep_infidelity, n=args.qubits)
    rng = np.random.default_rng(args.seed)
    result = full_state_tomography(rho, noise_sigma=args.noise_sigma, rng=rng)
    target = StateVector.basis(args.qubits, 0)
    raw = state_fidelity(result.reconstructed, target)
    normalized = pps_deviation_fidelity(result.reconstructed, target, args.epsilon)
    print(f"observables measured: {result.observable_count}")
    print(f"minimum eigenvalue of reconstruction: {result.min_eigenvalue:.3e}")
    print(f"fidelity to |{'0' * args.qubits}>: raw {raw:.6f}, "
          f"polarization-normalized {normalized:.6f}")
    if args.out:
        export_expectations(result, args.out)
        print(f"wrote expectations to {args.out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "grape": _cmd_grape, "tomography": _cmd_tomography}
    try:
        return handlers[args.command](args)
    except Exception as exc:  # contract violations exit nonzero with a message
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
