"""Amplitude-robust rotations from a Fourier-modulated detuning.

A pulse of this family has a rectangular envelope of amplitude Omega_0 and a drive
frequency offset sum_k a_k sin(2 pi k t / T). Its parameters are tuned so that the
propagator stays close to a target rotation for amplitudes across a window around
Omega_0. Internally the optimizer works in units of Omega_2pi = 2 pi / T.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize

from .errors import DomainError, InvalidInputError
from .model import SIGMA_X, SIGMA_Y, TWO_PI, TwoLevelModel, frame_phases
from .propagator import DEFAULT_STEPS, frame_operator, propagate_many
from .pulses import DetuningProfile, Envelope, Pulse


@dataclass(frozen=True)
class TargetRotation:
    angle: float
    axis_angle: float = np.pi / 2

    def __post_init__(self):
        if not (np.isfinite(self.angle) and np.isfinite(self.axis_angle)):
            raise InvalidInputError("rotation angles must be finite")

    @property
    def generator(self) -> np.ndarray:
        return np.cos(self.axis_angle) * SIGMA_Y + np.sin(self.axis_angle) * SIGMA_X

    @property
    def unitary(self) -> np.ndarray:
        return np.cos(self.angle / 2) * np.eye(2) - 1j * np.sin(self.angle / 2) * self.generator

    @property
    def drive_phase(self) -> float:
        """Quadrature phase that puts the rotation axis at ``axis_angle``."""
        return np.pi / 2 - self.axis_angle

    @property
    def transfer_probability(self) -> float:
        return float(np.sin(self.angle / 2) ** 2)


def robust_pulse(amplitude: float, coefficients, duration: float = 1.0, axis_angle: float = np.pi / 2) -> Pulse:
    return Pulse(duration, Envelope.rectangular(amplitude), DetuningProfile.fourier(coefficients),
                 phase=np.pi / 2 - axis_angle)


@dataclass
class RobustPulseSolution:
    """Optimized parameters. ``amplitude`` and ``coefficients`` are angular frequencies."""

    angle: float
    amplitude: float
    coefficients: tuple
    objective: float
    window: tuple
    duration: float = 1.0
    converged: bool = True
    iterations: int = 0
    history: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.coefficients = tuple(float(a) for a in self.coefficients)
        self.window = tuple(float(w) for w in self.window)

    @property
    def params(self) -> np.ndarray:
        return np.array([self.amplitude, *self.coefficients])

    def pulse(self, axis_angle: float = np.pi / 2, amplitude: Optional[float] = None) -> Pulse:
        amp = self.amplitude if amplitude is None else amplitude
        return robust_pulse(amp, self.coefficients, self.duration, axis_angle)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coefficients"] = list(self.coefficients)
        d["window"] = list(self.window)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RobustPulseSolution":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


@dataclass(frozen=True)
class OptimizerConfig:
    harmonics: int = 4
    window_fraction: float = 0.2
    n_samples: int = 9
    steps: int = DEFAULT_STEPS
    restarts: int = 8
    max_iterations: int = 400
    gradient_tol: float = 1e-5
    fd_step: float = 1e-4
    seed: int = 0
    duration: float = 1.0

    def __post_init__(self):
        problems = []
        if self.harmonics < 1:
            problems.append("harmonics must be >= 1")
        if not 0 < self.window_fraction <= 0.5:
            problems.append("window_fraction must lie in (0, 0.5]")
        if self.n_samples < 3:
            problems.append("n_samples must be >= 3")
        if self.restarts < 1:
            problems.append("restarts must be >= 1")
        if not self.fd_step > 0:
            problems.append("fd_step must be positive")
        if not self.duration > 0:
            problems.append("duration must be positive")
        if problems:
            raise InvalidInputError("; ".join(problems))


def frobenius_distance(u, v) -> float:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise InvalidInputError(f"dimension mismatch {u.shape} vs {v.shape}")
    return float(np.sqrt(np.sum(np.abs(u - v) ** 2)))


def window_amplitudes(window, n_samples: int) -> np.ndarray:
    lo, hi = window
    return np.linspace(lo, hi, n_samples)


def qubit_frame_unitaries(amplitudes, coefficients, duration: float, axis_angle: float,
                          steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Qubit-frame propagators of the robust family for each amplitude."""
    pulses = [robust_pulse(a, coefficients, duration, axis_angle) for a in np.atleast_1d(amplitudes)]
    us = propagate_many(pulses, TwoLevelModel(), steps)
    phi = frame_phases(pulses[0], steps)[-1]
    return frame_operator(phi) @ us


def robust_objective(params, target: TargetRotation, window, n_samples: int = 9,
                     duration: float = 1.0, steps: int = DEFAULT_STEPS) -> float:
    """Mean Frobenius distance to the target over ``n_samples`` amplitudes spanning ``window``.

    ``params`` = (Omega_0, a_1, ..., a_K) in angular units.
    """
    params = np.asarray(params, dtype=float)
    lo, hi = window
    if n_samples < 3:
        raise InvalidInputError("n_samples must be >= 3")
    if not lo - 1e-12 <= params[0] <= hi + 1e-12:
        raise InvalidInputError(f"window [{lo}, {hi}] does not contain Omega_0={params[0]}")
    us = qubit_frame_unitaries(window_amplitudes(window, n_samples), params[1:], duration,
                               target.axis_angle, steps)
    return float(np.mean(np.sqrt(np.sum(np.abs(us - target.unitary) ** 2, axis=(1, 2)))))


def fd_gradient(f: Callable, x, h: float = 1e-4) -> np.ndarray:
    """Central finite-difference gradient."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def _scaled_objective(target, config):
    """Objective on x = params / Omega_2pi with the window tied to x[0]."""
    ref = TWO_PI / config.duration
    frac = config.window_fraction

    def f(x):
        amp = abs(x[0]) * ref
        return robust_objective(np.r_[amp, x[1:] * ref], target, ((1 - frac) * amp, (1 + frac) * amp),
                                config.n_samples, config.duration, config.steps)

    return f


def _descend(f, x0, config):
    history = [f(x0)]
    res = minimize(f, x0, jac=lambda x: fd_gradient(f, x, config.fd_step), method="BFGS",
                   callback=lambda xk: history.append(f(xk)),
                   options=dict(gtol=config.gradient_tol, maxiter=config.max_iterations))
    x = np.array(res.x)
    x[0] = abs(x[0])
    return x, float(res.fun), bool(res.success), int(res.nit), history


def _seeds(target, config, seed_params, rng):
    k = config.harmonics
    ref = TWO_PI / config.duration
    if seed_params is not None:
        s = np.asarray(seed_params, dtype=float) / ref
        if s.size != k + 1 or not np.all(np.isfinite(s)):
            raise InvalidInputError(f"seed must hold {k + 1} finite values")
        yield s
    # Rabi amplitude for the angle, with a small modulation to leave the Rabi saddle
    yield np.r_[abs(target.angle) / TWO_PI, np.full(k, 0.1)]
    extra = config.restarts - 1 if seed_params is None else config.restarts - 2
    for _ in range(max(extra, 0)):
        yield np.r_[rng.uniform(0.5, 3.0), rng.normal(0.0, 1.0, k)]


def optimize_rotation(target: TargetRotation, config: OptimizerConfig = OptimizerConfig(),
                      seed_params=None, window_fraction: Optional[float] = None) -> RobustPulseSolution:
    """Minimize the window-averaged Frobenius distance from several starting points.

    The best restart wins; ties go to the smallest modulation norm.
    """
    if window_fraction is not None:
        config = OptimizerConfig(**{**asdict(config), "window_fraction": window_fraction})
    ref = TWO_PI / config.duration
    frac = config.window_fraction
    if seed_params is None and abs(np.sin(target.angle / 2)) < 1e-12 and np.cos(target.angle / 2) > 0.5:
        # identity target: the undriven pulse is exact
        return RobustPulseSolution(target.angle, 0.0, np.zeros(config.harmonics), 0.0, (0.0, 0.0),
                                   config.duration, True, 0, [0.0])
    f = _scaled_objective(target, config)
    rng = np.random.default_rng(config.seed)
    best = None
    for x0 in _seeds(target, config, seed_params, rng):
        x, fx, ok, nit, hist = _descend(f, x0, config)
        key = (round(fx, 10), float(np.linalg.norm(x[1:])))
        if best is None or key < best[0]:
            best = (key, x, fx, ok, nit, hist)
    _, x, fx, ok, nit, hist = best
    amp = x[0] * ref
    return RobustPulseSolution(target.angle, amp, tuple(x[1:] * ref), fx,
                               ((1 - frac) * amp, (1 + frac) * amp), config.duration, ok, nit, hist)


def anchor_angles(count: int = 10) -> np.ndarray:
    """Angles whose transfer probabilities are i / count, i = 1..count."""
    p = np.arange(1, count + 1) / count
    return 2 * np.arcsin(np.sqrt(p))


def build_family(angles: Sequence[float], config: OptimizerConfig = OptimizerConfig(),
                 progress: Optional[Callable] = None) -> list:
    """Solve the largest angle with restarts, then continue downward seeding from the neighbour.

    Continuation keeps the parameter curves smooth in the angle.
    """
    order = sorted(angles, reverse=True)
    out = []
    prev = None
    for th in order:
        tgt = TargetRotation(th)
        if prev is None:
            sol = optimize_rotation(tgt, config)
        else:
            sol = optimize_rotation(tgt, OptimizerConfig(**{**asdict(config), "restarts": 1}),
                                    seed_params=prev.params)
        out.append(sol)
        prev = sol
        if progress:
            progress(sol)
    return sorted(out, key=lambda s: s.angle)


@dataclass(frozen=True)
class FamilyInterpolant:
    angles: np.ndarray
    anchor_amplitudes: np.ndarray
    anchor_coefficients: np.ndarray
    amplitudes: PchipInterpolator
    coefficients: PchipInterpolator
    duration: float

    def __call__(self, angle: float):
        return interpolate_family(self, angle)


def family_interpolant(solutions: Sequence[RobustPulseSolution]) -> FamilyInterpolant:
    if len(solutions) < 2:
        raise InvalidInputError("need at least two anchor solutions")
    sols = sorted(solutions, key=lambda s: s.angle)
    th = np.array([s.angle for s in sols])
    if np.any(np.diff(th) <= 0):
        raise InvalidInputError("anchor angles must be distinct")
    amps = np.array([s.amplitude for s in sols])
    coefs = np.array([s.coefficients for s in sols])
    return FamilyInterpolant(th, amps, coefs, PchipInterpolator(th, amps), PchipInterpolator(th, coefs, axis=0),
                             sols[0].duration)


def interpolate_family(solutions, angle: float):
    """Monotone cubic interpolation of (Omega_0, a_k) in the angle.

    Returns (amplitude, coefficients). ``solutions`` may be a list of anchors or a
    prebuilt FamilyInterpolant.
    """
    fam = solutions if isinstance(solutions, FamilyInterpolant) else family_interpolant(solutions)
    lo, hi = fam.angles[0], fam.angles[-1]
    tol = 1e-12 * max(1.0, abs(hi))
    if not lo - tol <= angle <= hi + tol:
        raise DomainError(f"angle {angle} outside the anchor range [{lo}, {hi}]")
    angle = min(max(angle, lo), hi)
    hit = np.flatnonzero(np.abs(fam.angles - angle) <= tol)
    if hit.size:
        i = hit[0]
        return float(fam.anchor_amplitudes[i]), fam.anchor_coefficients[i].copy()
    return float(fam.amplitudes(angle)), np.asarray(fam.coefficients(angle))


def transfer_plateau(solution: RobustPulseSolution, target_probability: float, tolerance: float = 0.01,
                     amplitudes=None, steps: int = DEFAULT_STEPS):
    """Widest amplitude interval containing Omega_0 where |P1 - target| < tolerance.

    Returns (lo, hi) in angular units, or None if Omega_0 itself misses.
    """
    ref = TWO_PI / solution.duration
    if amplitudes is None:
        amplitudes = np.linspace(0.005, 6.0, 1200) * ref
    amplitudes = np.sort(np.append(amplitudes, solution.amplitude))
    us = qubit_frame_unitaries(amplitudes, solution.coefficients, solution.duration, np.pi / 2, steps)
    ok = np.abs(np.abs(us[:, 0, 1]) ** 2 - target_probability) < tolerance
    i0 = int(np.searchsorted(amplitudes, solution.amplitude))
    if not ok[i0]:
        return None
    lo = hi = i0
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    while hi < len(ok) - 1 and ok[hi + 1]:
        hi += 1
    return float(amplitudes[lo]), float(amplitudes[hi])


FAMILY_RESOURCE = "rotation_family.json"


def family_to_dict(solutions: Sequence[RobustPulseSolution], config: OptimizerConfig) -> dict:
    return {"config": asdict(config), "solutions": [s.to_dict() for s in sorted(solutions, key=lambda s: s.angle)]}


def family_from_dict(d: dict) -> list:
    return [RobustPulseSolution.from_dict(s) for s in d["solutions"]]


def load_family(path=None) -> list:
    """Solutions from ``path`` or the precomputed family shipped with the package."""
    import json
    from importlib import resources

    if path is None:
        text = resources.files("robustpulse").joinpath("data", FAMILY_RESOURCE).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return family_from_dict(json.loads(text))
