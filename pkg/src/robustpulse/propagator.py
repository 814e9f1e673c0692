"""Time evolution under a pulse.

Closed dynamics use piecewise-constant exponentials of the Hamiltonian sampled at
slice midpoints: second order in the step and exactly unitary per step. Open
dynamics use the same slices with a symmetric (Strang) split between the
unitary step and the exact relaxation/dephasing channel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numba as nb
import numpy as np

from .errors import InvalidInputError, ResolutionError, UnsupportedDimensionError
from .model import (KET_0, SIGMA_X, SIGMA_Y, SIGMA_Z, ThreeLevelModel, TwoLevelModel,
                    frame_phases)
from .pulses import Pulse, time_grid

DEFAULT_STEPS = 2048
MIN_STEPS = 64
FRAMES = ("drive_rotating", "qubit_rotating")

Model = Union[TwoLevelModel, ThreeLevelModel]


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@nb.njit(cache=True, inline="always")
def _su2_step(om, de, cp, sp, dt):
    hx = om * cp
    hy = om * sp
    hz = -de
    r = np.sqrt(hx * hx + hy * hy + hz * hz)
    half = 0.5 * r * dt
    co = np.cos(half)
    s = np.sin(half) / r if r > 0.0 else 0.5 * dt
    return co - 1j * s * hz, -s * hy - 1j * s * hx


@nb.njit(cache=True, parallel=True)
def _su2_batch(amp, phase, env, coef, basis, dt):
    nb_ = amp.shape[0]
    ns = env.shape[0]
    nj = basis.shape[0]
    out = np.empty((nb_, 2, 2), np.complex128)
    for b in nb.prange(nb_):
        a = 1.0 + 0.0j
        c = 0.0 + 0.0j
        cp = np.cos(phase[b])
        sp = np.sin(phase[b])
        for s in range(ns):
            de = 0.0
            for j in range(nj):
                de += coef[b, j] * basis[j, s]
            al, be = _su2_step(amp[b] * env[s], de, cp, sp, dt)
            a, c = al * a - be * np.conj(c), al * c + be * np.conj(a)
        out[b, 0, 0] = a
        out[b, 0, 1] = c
        out[b, 1, 0] = -np.conj(c)
        out[b, 1, 1] = np.conj(a)
    return out


@nb.njit(cache=True)
def _su2_path(omega, delta, phase, dt):
    ns = omega.shape[0]
    out = np.empty((ns + 1, 2, 2), np.complex128)
    a = 1.0 + 0.0j
    c = 0.0 + 0.0j
    cp = np.cos(phase)
    sp = np.sin(phase)
    out[0] = np.eye(2)
    for s in range(ns):
        al, be = _su2_step(omega[s], delta[s], cp, sp, dt)
        a, c = al * a - be * np.conj(c), al * c + be * np.conj(a)
        out[s + 1, 0, 0] = a
        out[s + 1, 0, 1] = c
        out[s + 1, 1, 0] = -np.conj(c)
        out[s + 1, 1, 1] = np.conj(a)
    return out


@nb.njit(cache=True, inline="always")
def _relax(rho, tau, g1, g2):
    # exact amplitude damping + dephasing over tau; index 0 is the excited state
    p = rho[0, 0].real
    lost = p * (1.0 - np.exp(-g1 * tau))
    rho[0, 0] = p - lost
    rho[1, 1] = rho[1, 1] + lost
    f = np.exp(-g2 * tau)
    rho[0, 1] = rho[0, 1] * f
    rho[1, 0] = rho[1, 0] * f


@nb.njit(cache=True, inline="always")
def _conjugate(rho, al, be):
    u = np.empty((2, 2), np.complex128)
    u[0, 0] = al
    u[0, 1] = be
    u[1, 0] = -np.conj(be)
    u[1, 1] = np.conj(al)
    r = u @ rho @ u.conj().T
    rho[:, :] = 0.5 * (r + r.conj().T)


@nb.njit(cache=True)
def _lindblad_path(omega, delta, phase, dt, rho0, g1, g2, store):
    ns = omega.shape[0]
    rho = rho0.copy()
    nout = ns + 1 if store else 1
    out = np.empty((nout, 2, 2), np.complex128)
    out[0] = rho
    cp = np.cos(phase)
    sp = np.sin(phase)
    for s in range(ns):
        _relax(rho, 0.5 * dt, g1, g2)
        al, be = _su2_step(omega[s], delta[s], cp, sp, dt)
        _conjugate(rho, al, be)
        _relax(rho, 0.5 * dt, g1, g2)
        if store:
            out[s + 1] = rho
    if not store:
        out[0] = rho
    return out


@nb.njit(cache=True)
def _lindblad_sequence(amp, phase, coef, env, basis, dt, rho0, g1, g2):
    """Apply gates g = 0..G-1 (each a pulse on the shared envelope/basis) in order."""
    ng = amp.shape[0]
    ns = env.shape[0]
    nj = basis.shape[0]
    rho = rho0.copy()
    for g in range(ng):
        cp = np.cos(phase[g])
        sp = np.sin(phase[g])
        for s in range(ns):
            de = 0.0
            for j in range(nj):
                de += coef[g, j] * basis[j, s]
            _relax(rho, 0.5 * dt, g1, g2)
            al, be = _su2_step(amp[g] * env[s], de, cp, sp, dt)
            _conjugate(rho, al, be)
            _relax(rho, 0.5 * dt, g1, g2)
    return rho


@nb.njit(cache=True, inline="always")
def _qutrit_step(om, de, ec, lam, dt, h):
    h[0, 0] = de
    h[1, 1] = 0.0
    h[2, 2] = -ec - de
    h[0, 1] = 0.5 * om
    h[1, 0] = 0.5 * om
    h[1, 2] = 0.5 * lam * om
    h[2, 1] = 0.5 * lam * om
    w, v = np.linalg.eigh(h)
    vc = v.astype(np.complex128)
    return (vc * np.exp(-1j * w * dt)) @ vc.T


@nb.njit(cache=True, parallel=True)
def _qutrit_batch(amp, env, coef, basis, dt, ec, lam):
    nb_ = amp.shape[0]
    ns = env.shape[0]
    nj = basis.shape[0]
    out = np.empty((nb_, 3, 3), np.complex128)
    for b in nb.prange(nb_):
        h = np.zeros((3, 3))
        u = np.eye(3).astype(np.complex128)
        for s in range(ns):
            de = 0.0
            for j in range(nj):
                de += coef[b, j] * basis[j, s]
            u = _qutrit_step(amp[b] * env[s], de, ec, lam, dt, h) @ u
        out[b] = u
    return out


@nb.njit(cache=True)
def _qutrit_path(omega, delta, dt, ec, lam):
    ns = omega.shape[0]
    out = np.empty((ns + 1, 3, 3), np.complex128)
    h = np.zeros((3, 3))
    u = np.eye(3).astype(np.complex128)
    out[0] = u
    for s in range(ns):
        u = _qutrit_step(omega[s], delta[s], ec, lam, dt, h) @ u
        out[s + 1] = u
    return out


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseModel:
    t1: float
    t2: float
    readout_sigma: float = 0.003

    def __post_init__(self):
        if not (self.t1 > 0 and self.t2 > 0):
            raise InvalidInputError("t1 and t2 must be positive")
        if self.dephasing_rate < -1e-12 / self.t2:
            raise InvalidInputError(f"t2={self.t2} exceeds 2*t1={2 * self.t1}")

    @property
    def relaxation_rate(self) -> float:
        return 1.0 / self.t1

    @property
    def dephasing_rate(self) -> float:
        """Pure dephasing rate 1/t2 - 1/(2 t1)."""
        return 1.0 / self.t2 - 0.5 / self.t1

    @property
    def coherence_rate(self) -> float:
        return 1.0 / self.t2


@dataclass
class PropagationResult:
    final_unitary: Optional[np.ndarray]
    frame: str = "drive_rotating"
    final_density: Optional[np.ndarray] = None
    times: Optional[np.ndarray] = None
    unitaries: Optional[np.ndarray] = None
    densities: Optional[np.ndarray] = None
    phases: Optional[np.ndarray] = None
    steps: int = DEFAULT_STEPS

    @property
    def levels(self) -> int:
        if self.final_unitary is not None:
            return self.final_unitary.shape[0]
        return self.final_density.shape[0]

    @property
    def has_trajectory(self) -> bool:
        return self.times is not None


def _check_steps(steps):
    if int(steps) != steps or steps < MIN_STEPS:
        raise InvalidInputError(f"steps must be an integer >= {MIN_STEPS}, got {steps}")


def _check_frame(frame):
    if frame not in FRAMES:
        raise InvalidInputError(f"frame must be one of {FRAMES}, got {frame!r}")


def frame_operator(phi, levels: int = 2) -> np.ndarray:
    """Drive-frame -> qubit-frame change of basis for accumulated phase ``phi``."""
    if levels == 2:
        return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])
    return np.diag([1.0, np.exp(-1j * phi), np.exp(-2j * phi)])


def _final_unitary(p: Pulse, model: Model, steps: int) -> np.ndarray:
    return propagate_many([p], model, steps)[0]


def propagate_unitary(p: Pulse, model: Model = TwoLevelModel(), steps: int = DEFAULT_STEPS,
                      trajectory: bool = False, frame: str = "drive_rotating",
                      check_convergence: bool = True) -> PropagationResult:
    """Integrate dU/dt = -i H(t) U from -T/2 to T/2 starting at U = 1.

    With ``check_convergence`` the final propagator is recomputed at twice the
    resolution and a change above 1e-4 (Frobenius) raises ResolutionError.
    """
    _check_steps(steps)
    _check_frame(frame)
    levels = model.levels
    t, dt, om, de = p.controls(steps)
    if trajectory:
        if levels == 2:
            us = _su2_path(om, de, p.phase, dt)
        else:
            us = _qutrit_path(om, de, dt, model.anharmonicity, model.dipole_ratio)
            if p.phase:
                d = frame_operator(-p.phase, 3)
                us = d @ us @ d.conj().T
        u = us[-1].copy()
    else:
        u = _final_unitary(p, model, steps)
    if check_convergence:
        u2 = _final_unitary(p, model, 2 * steps)
        change = np.linalg.norm(u2 - u)
        if change > 1e-4:
            raise ResolutionError(
                f"step doubling changed the propagator by {change:.2e}; increase steps above {steps}")
    phases = frame_phases(p, steps)
    res = PropagationResult(final_unitary=u, frame=frame, steps=steps)
    if trajectory:
        res.times = np.linspace(-0.5 * p.duration, 0.5 * p.duration, steps + 1)
        res.unitaries = us
        res.phases = phases
    if frame == "qubit_rotating":
        res.final_unitary = frame_operator(phases[-1], levels) @ u
        if trajectory:
            res.unitaries = np.einsum("nij,njk->nik", _frame_ops(phases, levels), us)
    return res


def _frame_ops(phases, levels):
    return np.array([frame_operator(ph, levels) for ph in phases])


def _shared_layout(pulses: Sequence[Pulse]):
    first = pulses[0]
    T = first.duration
    env, det = first.envelope, first.detuning
    ncoef = len(det.coefficients)
    for q in pulses:
        if (q.duration != T or q.envelope.kind != env.kind or q.envelope.tau != env.tau
                or q.detuning.kind != det.kind or len(q.detuning.coefficients) != ncoef):
            raise InvalidInputError("batched pulses must share duration, envelope shape and detuning kind")
    return first


def _batch_arrays(pulses: Sequence[Pulse], steps: int):
    first = _shared_layout(pulses)
    T = first.duration
    t, dt = time_grid(T, steps)
    env = first.envelope.shape(t)
    basis, _ = first.detuning.basis(t, T)
    amp = np.array([q.envelope.peak_amplitude for q in pulses], dtype=float)
    coef = np.array([q.detuning.basis(0.0, T)[1] for q in pulses], dtype=float)
    phase = np.array([q.phase for q in pulses], dtype=float)
    return amp, phase, env, np.ascontiguousarray(coef), np.ascontiguousarray(basis), dt


def propagate_many(pulses: Sequence[Pulse], model: Model = TwoLevelModel(),
                   steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Final drive-frame propagators for pulses sharing shape and detuning kind, shape (B, d, d)."""
    _check_steps(steps)
    if len(pulses) == 0:
        return np.empty((0, model.levels, model.levels), complex)
    amp, phase, env, coef, basis, dt = _batch_arrays(pulses, steps)
    if model.levels == 2:
        return _su2_batch(amp, phase, env, coef, basis, dt)
    us = _qutrit_batch(amp, env, coef, basis, dt, float(model.anharmonicity), float(model.dipole_ratio))
    if np.any(phase):
        for i, ph in enumerate(phase):
            if ph:
                d = frame_operator(-ph, 3)
                us[i] = d @ us[i] @ d.conj().T
    return us


def propagate_interval(p: Pulse, t0: float, t1: float, model: Model = TwoLevelModel(),
                       steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Drive-frame propagator from t0 to t1 using ``steps`` midpoint slices of that interval."""
    T = p.duration
    if not (-0.5 * T - 1e-12 * T <= t0 <= t1 <= 0.5 * T + 1e-12 * T):
        raise InvalidInputError(f"interval [{t0}, {t1}] not inside the pulse window")
    if int(steps) != steps or steps < 1:
        raise InvalidInputError("steps must be a positive integer")
    dt = (t1 - t0) / steps
    t = t0 + (np.arange(steps) + 0.5) * dt
    om, de = p.rabi(t), p.delta(t)
    if model.levels == 2:
        return _su2_path(om, de, p.phase, dt)[-1].copy()
    u = _qutrit_path(om, de, dt, model.anharmonicity, model.dipole_ratio)[-1]
    d = frame_operator(-p.phase, 3)
    return d @ u @ d.conj().T


def ground_state_density() -> np.ndarray:
    return np.outer(KET_0, KET_0.conj())


def propagate_open(p: Pulse, model: Model = TwoLevelModel(), noise: Optional[NoiseModel] = None,
                   steps: int = DEFAULT_STEPS, rho0: Optional[np.ndarray] = None,
                   trajectory: bool = False) -> PropagationResult:
    """Lindblad evolution with relaxation at 1/t1 and pure dephasing at 1/t2 - 1/(2 t1).

    ``noise`` defaults to the model's t1/t2. The initial state defaults to |0><0|.
    """
    _check_steps(steps)
    if model.levels != 2:
        raise UnsupportedDimensionError("open-system propagation is implemented for two levels only")
    if noise is None:
        if model.t1 is None or model.t2 is None:
            raise InvalidInputError("no noise model given and the system model has no t1/t2")
        noise = NoiseModel(model.t1, model.t2)
    rho0 = ground_state_density() if rho0 is None else np.asarray(rho0, dtype=complex)
    t, dt, om, de = p.controls(steps)
    g2 = 0.5 * noise.relaxation_rate + noise.dephasing_rate
    out = _lindblad_path(om, de, p.phase, dt, np.ascontiguousarray(rho0), noise.relaxation_rate, g2,
                         trajectory)
    res = PropagationResult(final_unitary=None, final_density=out[-1].copy(), steps=steps)
    if trajectory:
        res.times = np.linspace(-0.5 * p.duration, 0.5 * p.duration, steps + 1)
        res.densities = out
        res.phases = frame_phases(p, steps)
    return res


def apply_gate_sequence(pulses: Sequence[Pulse], noise: NoiseModel, steps: int = DEFAULT_STEPS,
                        rho0: Optional[np.ndarray] = None) -> np.ndarray:
    """Final density matrix after applying ``pulses`` in order under the Lindblad model."""
    _check_steps(steps)
    rho0 = ground_state_density() if rho0 is None else np.asarray(rho0, dtype=complex)
    if len(pulses) == 0:
        return rho0.copy()
    amp, phase, env, coef, basis, dt = _batch_arrays(pulses, steps)
    g2 = 0.5 * noise.relaxation_rate + noise.dephasing_rate
    return _lindblad_sequence(amp, phase, coef, env, basis, dt, np.ascontiguousarray(rho0),
                              noise.relaxation_rate, g2)


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """(<sigma_x>, <sigma_y>, <sigma_z>) with the excited state at +z."""
    rho = np.asarray(rho)
    return np.real(np.stack([np.trace(s @ rho, axis1=-2, axis2=-1) if rho.ndim == 3 else np.trace(s @ rho)
                             for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)], axis=-1))


def bloch_trajectory(result: PropagationResult, frame: str = "drive_rotating",
                     initial: np.ndarray = KET_0) -> np.ndarray:
    """Rows (t, x, y, z) along a stored trajectory, expressed in ``frame``."""
    _check_frame(frame)
    if result.levels != 2:
        raise UnsupportedDimensionError("Bloch trajectories exist for two-level results only")
    if not result.has_trajectory:
        raise InvalidInputError("result has no stored trajectory; propagate with trajectory=True")
    if result.unitaries is not None:
        psi = result.unitaries @ np.asarray(initial, dtype=complex)
        rho = np.einsum("ni,nj->nij", psi, psi.conj())
    else:
        rho = result.densities
    if frame != result.frame:
        sign = 1.0 if frame == "qubit_rotating" else -1.0
        ops = _frame_ops(sign * result.phases, 2)
        rho = ops @ rho @ np.conj(np.swapaxes(ops, 1, 2))
    xyz = bloch_vector(rho)
    return np.column_stack([result.times, xyz])


def excited_population(u: np.ndarray) -> np.ndarray:
    """P1 = |<1|U|0>|^2 for two-level propagators (works on stacks)."""
    return np.abs(np.asarray(u)[..., 0, 1]) ** 2


def level_populations(u: np.ndarray) -> np.ndarray:
    """Populations after starting in the ground state.

    Two-level input returns columns (P0, P1); three-level returns (P0, P1, P2).
    """
    u = np.asarray(u)
    if u.shape[-1] == 2:
        col = np.abs(u[..., :, 1]) ** 2
        return col[..., ::-1]
    return np.abs(u[..., :, 0]) ** 2
