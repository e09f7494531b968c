"""Gradient-ascent synthesis of piecewise-constant control pulses.

The control model is a single homonuclear transmitter: every segment k
applies H_k = H_int + u_x[k] Fx + u_y[k] Fy for a duration dt, where Fx and
Fy are the global half-Pauli drives sum_j sigma_{x,y}^j / 2 (optionally
weighted per spin for selective hardware).  Amplitudes are Rabi angular
frequencies in rad/s, capped at a configurable bound.

The cost is the phase-invariant trace overlap |tr(V^dag U)| / 2^n.  Its
gradient is exact: each segment propagator is differentiated through the
eigendecomposition (Loewner/divided-difference form), not the first-order
short-time approximation, so it matches central finite differences to
rounding accuracy.

The optimizer is gradient ascent with heavy-ball momentum and a
backtracking step control; a rejected trial halves the step and clears the
momentum, so the fidelity of accepted iterates never decreases.  Restarts
draw fresh initial pulses from the seeded generator, which makes every
trajectory reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .nmr import SpinSystem, internal_hamiltonian
from .qcore import PAULI, UnitaryMatrix, embed_operator, operator_array

DEFAULT_AMPLITUDE_BOUND = 2 * math.pi * 10e3  # rad/s, a 10 kHz Rabi cap
DEFAULT_DT = 50e-6


class GrapeConvergenceError(RuntimeError):
    """Raised when no restart reaches the target fidelity; carries the best result."""

    def __init__(self, message: str, result: "OptimizeResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class ControlPulse:
    """Piecewise-constant x/y drive amplitudes; one row per segment."""

    dt: float
    amplitudes: np.ndarray
    max_amplitude: float = DEFAULT_AMPLITUDE_BOUND
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=float).reshape(-1, 2)
        if self.dt <= 0:
            raise ValueError(f"segment duration must be positive, got {self.dt}")
        if amps.size and np.abs(amps).max() > self.max_amplitude * (1 + 1e-12):
            raise ValueError("amplitudes exceed the configured bound")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_segments(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def duration(self) -> float:
        return self.n_segments * self.dt


@dataclass(frozen=True)
class OptimizerConfig:
    target_fidelity: float = 0.995
    max_iterations: int = 6000
    step_init: float = 0.2        # first trial step, in units of the amplitude bound
    step_grow: float = 1.25
    step_shrink: float = 0.5
    momentum: float = 0.9
    amplitude_bound: float = DEFAULT_AMPLITUDE_BOUND
    restarts: int = 3
    seed: int = 0
    init_scale: float = 0.02      # std of the random initial amplitudes / bound

    def __post_init__(self):
        if not 0 < self.target_fidelity <= 1:
            raise ValueError("target fidelity must be in (0, 1]")
        if self.restarts < 1:
            raise ValueError("need at least one restart")


@dataclass
class OptimizeResult:
    pulse: ControlPulse
    fidelity: float
    iterations: int
    restarts_used: int
    converged: bool
    history: np.ndarray = field(repr=False, default=None)


def drive_operators(sys: SpinSystem, weights=None) -> tuple[np.ndarray, np.ndarray]:
    """Global x/y drive generators sum_j w_j sigma_{x,y}^j / 2."""
    n = sys.n
    if weights is None:
        weights = (1.0,) * n
    if len(weights) != n:
        raise ValueError("one weight per spin required")
    fx = sum(w * embed_operator(PAULI["X"], [q], n) for q, w in enumerate(weights)) / 2.0
    fy = sum(w * embed_operator(PAULI["Y"], [q], n) for q, w in enumerate(weights)) / 2.0
    return fx, fy


def _segment_eigs(pulse: ControlPulse, sys: SpinSystem):
    h0 = internal_hamiltonian(sys).matrix
    fx, fy = drive_operators(sys, pulse.weights)
    u = pulse.amplitudes
    hs = h0[None, :, :] + u[:, 0, None, None] * fx[None] + u[:, 1, None, None] * fy[None]
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * pulse.dt * w)
    props = np.einsum("kab,kb,kcb->kac", v, phases, v.conj())
    return props, w, v, phases, fx, fy


def segment_propagators(pulse: ControlPulse, sys: SpinSystem) -> np.ndarray:
    """Per-segment propagators exp(-i (H_int + drive_k) dt), shape (N, d, d)."""
    if pulse.n_segments == 0:
        return np.eye(2**sys.n, dtype=complex)[None, :, :][:0]
    return _segment_eigs(pulse, sys)[0]


def pulse_to_unitary(pulse: ControlPulse, sys: SpinSystem) -> UnitaryMatrix:
    """Ordered product of the segment propagators."""
    total = np.eye(2**sys.n, dtype=complex)
    for u in segment_propagators(pulse, sys):
        total = u @ total
    return UnitaryMatrix(total)


def fidelity(u, target) -> float:
    """Phase-invariant overlap |tr(target^dag u)| / 2^n in [0, 1]."""
    umat = operator_array(u)
    tmat = operator_array(target)
    if umat.shape != tmat.shape:
        raise ValueError("dimension mismatch in fidelity")
    return float(abs(np.trace(tmat.conj().T @ umat)) / umat.shape[0])


def _fidelity_and_gradient(pulse: ControlPulse, sys: SpinSystem, target: np.ndarray):
    n_seg = pulse.n_segments
    d = 2**sys.n
    if n_seg == 0:
        return fidelity(np.eye(d, dtype=complex), target), np.zeros((0, 2))
    props, w, v, phases, fx, fy = _segment_eigs(pulse, sys)
    dt = pulse.dt

    forward = np.empty((n_seg, d, d), dtype=complex)  # forward[k] = U_k ... U_1
    acc = np.eye(d, dtype=complex)
    for k in range(n_seg):
        acc = props[k] @ acc
        forward[k] = acc
    backward = np.empty((n_seg, d, d), dtype=complex)  # backward[k] = U_N ... U_{k+1}
    acc = np.eye(d, dtype=complex)
    for k in range(n_seg - 1, -1, -1):
        backward[k] = acc
        acc = acc @ props[k]

    overlap = np.trace(target.conj().T @ forward[-1])
    fid = abs(overlap) / d

    # divided differences of f(x) = exp(-i dt x) on the segment spectra;
    # below the threshold the quotient cancels catastrophically, so switch
    # to the confluent limit -i dt f(x) (error O(gap * dt) relative)
    gaps = w[:, :, None] - w[:, None, :]
    numer = phases[:, :, None] - phases[:, None, :]
    degenerate = np.abs(gaps) * dt < 1e-9
    lam = np.where(
        degenerate,
        (-1j * dt) * phases[:, :, None] * np.ones_like(numer),
        numer / np.where(degenerate, 1.0, gaps),
    )

    shifted = np.concatenate([np.eye(d, dtype=complex)[None], forward[:-1]])
    mixer = np.einsum("kab,bc,kcd->kad", shifted, target.conj().T, backward)
    prefactor = np.conj(overlap) / max(abs(overlap), 1e-300) / d

    grads = np.empty((n_seg, 2))
    for c, drive in enumerate((fx, fy)):
        tilde = np.einsum("kba,bc,kcd->kad", v.conj(), drive, v)
        frechet = np.einsum("kab,kbc,kdc->kad", v, tilde * lam, v.conj())
        grads[:, c] = np.real(prefactor * np.einsum("kab,kba->k", mixer, frechet))
    return fid, grads


def gradient(pulse: ControlPulse, sys: SpinSystem, target) -> np.ndarray:
    """d fidelity / d amplitude for every segment and drive channel."""
    return _fidelity_and_gradient(pulse, sys, operator_array(target))[1]


def _fidelity_of(amps, dt, sys, target, bound, weights) -> float:
    pulse = ControlPulse(dt, amps, bound, weights)
    return fidelity(pulse_to_unitary(pulse, sys), target)


def optimize(
    target,
    sys: SpinSystem,
    duration: float,
    cfg: OptimizerConfig = OptimizerConfig(),
    *,
    dt: float = DEFAULT_DT,
    init: ControlPulse | None = None,
    weights=None,
    raise_on_failure: bool = True,
) -> OptimizeResult:
    """Search for a pulse of the given duration realizing ``target``.

    A warm start can be passed through ``init``; otherwise each restart
    draws a fresh random pulse from the seeded generator.  The best result
    across restarts is returned once the target fidelity is reached; if it
    never is, a :class:`GrapeConvergenceError` carrying the best attempt is
    raised (or the unconverged result returned when ``raise_on_failure`` is
    false).
    """
    tmat = operator_array(target)
    d = 2**sys.n
    if tmat.shape != (d, d):
        raise ValueError("target does not match the spin register")
    n_seg = max(1, round(duration / dt))
    bound = cfg.amplitude_bound
    rng = np.random.default_rng(cfg.seed)

    best: OptimizeResult | None = None
    total_iters = 0
    for restart in range(cfg.restarts):
        if init is not None and restart == 0:
            amps = np.array(init.amplitudes, dtype=float)
            if amps.shape[0] != n_seg:
                raise ValueError("warm-start pulse has the wrong segment count")
        else:
            amps = rng.normal(scale=cfg.init_scale * bound, size=(n_seg, 2))
        amps = np.clip(amps, -bound, bound)

        fid, grad = _fidelity_and_gradient(ControlPulse(dt, amps, bound, weights), sys, tmat)
        velocity = np.zeros_like(amps)
        step = cfg.step_init
        history = [fid]
        iters = 0
        while iters < cfg.max_iterations and fid < cfg.target_fidelity:
            iters += 1
            velocity = cfg.momentum * velocity + grad
            peak = np.abs(velocity).max()
            if peak < 1e-15 or step < 1e-12:
                break
            trial = np.clip(amps + step * bound * velocity / peak, -bound, bound)
            trial_fid = _fidelity_of(trial, dt, sys, tmat, bound, weights)
            if trial_fid > fid:
                amps, fid = trial, trial_fid
                history.append(fid)
                step = min(step * cfg.step_grow, 1.0)
                _, grad = _fidelity_and_gradient(
                    ControlPulse(dt, amps, bound, weights), sys, tmat
                )
            else:
                step *= cfg.step_shrink
                velocity[:] = 0.0
        total_iters += iters

        result = OptimizeResult(
            ControlPulse(dt, amps, bound, weights),
            fid,
            total_iters,
            restart + 1,
            fid >= cfg.target_fidelity,
            np.array(history),
        )
        if best is None or result.fidelity > best.fidelity:
            best = result
        if best.converged:
            break

    if not best.converged and raise_on_failure:
        raise GrapeConvergenceError(
            f"best fidelity {best.fidelity:.6f} below target "
            f"{cfg.target_fidelity} after {best.restarts_used} restart(s)",
            best,
        )
    return best


# ---------------------------------------------------------------------------
# pulse files: header with dt / segment count / duration, then one row per
# segment with the x and y amplitudes

def export_pulse(pulse: ControlPulse, path) -> None:
    lines = [
        f"# dt_s {float(pulse.dt)!r}",
        f"# n_segments {pulse.n_segments}",
        f"# duration_s {float(pulse.duration)!r}",
        f"# max_amplitude_rad_s {float(pulse.max_amplitude)!r}",
        "# index x_rad_s y_rad_s",
    ]
    for k, (x, y) in enumerate(pulse.amplitudes):
        lines.append(f"{k} {float(x)!r} {float(y)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def import_pulse(path) -> ControlPulse:
    dt = None
    bound = DEFAULT_AMPLITUDE_BOUND
    rows = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = line[1:].split()
            if fields and fields[0] == "dt_s":
                dt = float(fields[1])
            elif fields and fields[0] == "max_amplitude_rad_s":
                bound = float(fields[1])
            continue
        fields = line.split()
        rows.append((float(fields[1]), float(fields[2])))
    if dt is None:
        raise ValueError("pulse file lacks a dt_s header")
    return ControlPulse(dt, np.array(rows), bound)
