"""Figure-level computations: sweep maps, adiabatic-basis dynamics, eta, LZ, benchmarking."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage
from scipy.optimize import curve_fit

from .errors import DomainError, InvalidInputError, RobustPulseError, UnsupportedDimensionError
from .model import TWO_PI, ThreeLevelModel, TwoLevelModel, mixing_angle
from .optimize import FamilyInterpolant, family_interpolant, interpolate_family, load_family, robust_pulse
from .propagator import (DEFAULT_STEPS, NoiseModel, apply_gate_sequence, level_populations, propagate_many,
                         propagate_unitary)
from .pulses import DetuningProfile, Envelope, Pulse, node_grid

LEVEL_NAMES = ("P0", "P1", "P2")


@dataclass
class SweepGrid:
    axis1_name: str
    axis1: np.ndarray
    field: str
    values: np.ndarray
    axis2_name: Optional[str] = None
    axis2: Optional[np.ndarray] = None
    units: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axis1 = np.asarray(self.axis1, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.axis2 is not None:
            self.axis2 = np.asarray(self.axis2, dtype=float)
        shape = (self.axis1.size,) if self.axis2 is None else (self.axis1.size, self.axis2.size)
        if self.values.shape != shape:
            raise InvalidInputError(f"values shape {self.values.shape} does not match axes {shape}")

    @property
    def fields(self) -> dict:
        return {self.field: self.values, **self.extra}

    def long_rows(self, clip: bool = True):
        """(axis1, [axis2], field values...) rows; probabilities clipped to [0, 1]."""
        names = list(self.fields)
        cols = [np.clip(self.fields[n], 0.0, 1.0) if clip and n.startswith("P") else self.fields[n]
                for n in names]
        if self.axis2 is None:
            for i, a in enumerate(self.axis1):
                yield (float(a), *(float(c[i]) for c in cols))
        else:
            for i, a in enumerate(self.axis1):
                for j, b in enumerate(self.axis2):
                    yield (float(a), float(b), *(float(c[i, j]) for c in cols))

    def header(self):
        def label(n):
            u = self.units.get(n)
            return f"{n} [{u}]" if u else n
        axes = [self.axis1_name] + ([self.axis2_name] if self.axis2 is not None else [])
        return [label(n) for n in axes] + [label(n) for n in self.fields]


def _check_axis(name, values):
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if values.size == 0:
        raise InvalidInputError(f"{name} range is empty")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError(f"{name} range has non-finite values")
    return values


def make_envelope(kind: str, amplitude: float, duration: float, amplitude_axis: str = "mean") -> Envelope:
    """Envelope whose mean (default) or peak amplitude equals ``amplitude``."""
    if amplitude_axis == "mean":
        return Envelope.with_mean(kind, amplitude, duration)
    if amplitude_axis != "peak":
        raise InvalidInputError("amplitude_axis must be 'mean' or 'peak'")
    if kind == "rectangular":
        return Envelope.rectangular(amplitude)
    return getattr(Envelope, kind)(amplitude, duration)


def chirp_pulse(kind: str, amplitude: float, delta_max: float, duration: float = 1.0, offset: float = 0.0,
                amplitude_axis: str = "mean", phase: float = 0.0) -> Pulse:
    return Pulse(duration, make_envelope(kind, amplitude, duration, amplitude_axis),
                 DetuningProfile.linear_chirp(delta_max, offset), phase)


def _populations(pulses, model, steps, errors, index):
    """Level populations for each pulse; failures become NaN rows annotated in ``errors``."""
    try:
        return level_populations(propagate_many(pulses, model, steps))
    except RobustPulseError:
        out = np.empty((len(pulses), model.levels))
        for k, p in enumerate(pulses):
            try:
                out[k] = level_populations(propagate_many([p], model, steps))[0]
            except RobustPulseError as exc:
                out[k] = np.nan
                errors[index(k)] = str(exc)
        return out


def sweep_transfer_map(kind: str, omegas, delta_maxes, duration: float = 1.0, model=TwoLevelModel(),
                       steps: int = DEFAULT_STEPS, amplitude_axis: str = "mean", offset: float = 0.0) -> SweepGrid:
    """P1 after a chirped pulse on an (amplitude, delta_max) grid."""
    omegas = _check_axis("amplitude", omegas)
    dms = _check_axis("delta_max", delta_maxes)
    pulses = [chirp_pulse(kind, o, d, duration, offset, amplitude_axis) for o in omegas for d in dms]
    errors = {}
    pops = _populations(pulses, model, steps, errors, lambda k: divmod(k, dms.size))
    pops = pops.reshape(omegas.size, dms.size, -1)
    extra = {}
    if model.levels == 3:
        extra = {"P0": pops[..., 0], "P2": pops[..., 2]}
    return SweepGrid("omega", omegas, "P1", pops[..., 1], "delta_max", dms,
                     units={"omega": "rad/T", "delta_max": "rad/T"}, extra=extra, errors=errors)


def sweep_detuning(pulse: Pulse, deltas, model=TwoLevelModel(), steps: int = DEFAULT_STEPS,
                   delta_maxes=None) -> SweepGrid:
    """Populations versus a static drive offset delta (drive minus qubit).

    With ``delta_maxes`` the chirp amplitude of ``pulse`` is swept as a second axis.
    """
    deltas = _check_axis("delta", deltas)
    errors = {}
    if delta_maxes is None:
        pulses = [pulse.with_offset(d) for d in deltas]
        pops = _populations(pulses, model, steps, errors, lambda k: k)
        fields = {LEVEL_NAMES[i]: pops[:, i] for i in range(model.levels)}
        return SweepGrid("delta", deltas, "P1", fields.pop("P1"), units={"delta": "rad/T"},
                         extra=fields, errors=errors)
    dms = _check_axis("delta_max", delta_maxes)
    if pulse.detuning.kind != "linear_chirp":
        raise InvalidInputError("a delta_max axis needs a linear-chirp pulse")
    pulses = [Pulse(pulse.duration, pulse.envelope, DetuningProfile.linear_chirp(m, d), pulse.phase)
              for m in dms for d in deltas]
    pops = _populations(pulses, model, steps, errors, lambda k: divmod(k, deltas.size))
    pops = pops.reshape(dms.size, deltas.size, -1)
    fields = {LEVEL_NAMES[i]: pops[..., i] for i in range(model.levels)}
    return SweepGrid("delta_max", dms, "P1", fields.pop("P1"), "delta", deltas,
                     units={"delta_max": "rad/T", "delta": "rad/T"}, extra=fields, errors=errors)


def contiguous_window(x, ok, x0: float):
    """Endpoints of the run of True in ``ok`` (sampled at sorted ``x``) containing x0, or None."""
    x = np.asarray(x)
    ok = np.asarray(ok, dtype=bool)
    i0 = int(np.argmin(np.abs(x - x0)))
    if not ok[i0]:
        return None
    lo = hi = i0
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    while hi < ok.size - 1 and ok[hi + 1]:
        hi += 1
    return float(x[lo]), float(x[hi])


def count_stripes(values, support: float = 0.99, peak: float = 0.999) -> int:
    """Connected regions of values > support that somewhere exceed peak."""
    labels, n = ndimage.label(np.asarray(values) > support)
    if n == 0:
        return 0
    peaks = ndimage.maximum(values, labels, index=np.arange(1, n + 1))
    return int(np.sum(np.asarray(peaks) > peak))


def stripe_labels(values, support: float = 0.99, peak: float = 0.999):
    """Label array of the stripes counted by :func:`count_stripes` (0 = background)."""
    labels, n = ndimage.label(np.asarray(values) > support)
    keep = [i for i in range(1, n + 1) if values[labels == i].max() > peak]
    out = np.zeros_like(labels)
    for k, i in enumerate(keep, start=1):
        out[labels == i] = k
    return out, len(keep)


@dataclass
class AdiabaticTrace:
    times: np.ndarray
    p_minus: np.ndarray
    p_plus: np.ndarray
    relative_phase: np.ndarray
    p1: np.ndarray
    mixing_angle: np.ndarray
    dynamical_phase: np.ndarray
    flagged: np.ndarray

    @property
    def final_phase(self) -> float:
        return float(self.relative_phase[-1])


def adiabatic_trace(p: Pulse, model=TwoLevelModel(), steps: int = DEFAULT_STEPS) -> AdiabaticTrace:
    """State evolution from |0> expressed in the instantaneous eigenbasis (drive frame)."""
    if model.levels != 2:
        raise UnsupportedDimensionError("adiabatic traces are defined for two levels")
    res = propagate_unitary(p, model, steps, trajectory=True, check_convergence=False)
    psi = res.unitaries[:, :, 1]
    t = res.times
    om = p.rabi(t)
    de = p.delta(t)
    flagged = (om == 0) & (de == 0)
    th = mixing_angle(om, de)
    c, s = np.cos(th), np.sin(th)
    z = np.exp(-0.5j * p.phase), np.exp(0.5j * p.phase)
    # eigenvectors in (|1>, |0>) order, rotated by the drive phase
    em = np.stack([-s * z[0], c * z[1]], axis=1)
    ep = np.stack([c * z[0], s * z[1]], axis=1)
    cm = np.sum(em.conj() * psi, axis=1)
    cp = np.sum(ep.conj() * psi, axis=1)
    phase = np.unwrap(np.angle(cp) - np.angle(cm))
    r = np.hypot(om, de)
    mid = 0.5 * (r[1:] + r[:-1])
    dyn = np.concatenate([[0.0], np.cumsum(mid * np.diff(t))])
    if flagged.any():
        warnings.warn(f"{flagged.sum()} samples with Omega = Delta = 0; eigenbasis undefined there")
    return AdiabaticTrace(t, np.abs(cm) ** 2, np.abs(cp) ** 2, phase, np.abs(psi[:, 0]) ** 2, th, dyn, flagged)


@dataclass
class EtaSeries:
    times: np.ndarray
    eta: np.ndarray
    max_eta: float
    flagged: np.ndarray


def adiabaticity_eta(p: Pulse, steps: int = DEFAULT_STEPS) -> EtaSeries:
    """eta(t) = |dOmega/dt Delta - Omega dDelta/dt| / (Omega^2 + Delta^2)^(3/2) from analytic derivatives."""
    t = node_grid(p.duration, steps)
    om = p.rabi(t)
    dom = p.envelope.derivative(t)
    de = p.delta(t)
    dde = p.detuning.derivative(t, p.duration)
    den = (om**2 + de**2) ** 1.5
    flagged = den == 0
    eta = np.full_like(t, np.nan)
    eta[~flagged] = np.abs(dom * de - om * dde)[~flagged] / den[~flagged]
    if flagged.any():
        warnings.warn(f"{flagged.sum()} singular samples (Omega = Delta = 0) excluded from max eta")
    mx = float(np.nanmax(eta)) if (~flagged).any() else float("nan")
    return EtaSeries(t, eta, mx, flagged)


def eta_map(kind: str, omegas, delta_maxes, duration: float = 1.0, steps: int = DEFAULT_STEPS,
            amplitude_axis: str = "mean") -> SweepGrid:
    omegas = _check_axis("amplitude", omegas)
    dms = _check_axis("delta_max", delta_maxes)
    vals = np.array([[adiabaticity_eta(chirp_pulse(kind, o, d, duration, amplitude_axis=amplitude_axis),
                                       steps).max_eta for d in dms] for o in omegas])
    return SweepGrid("omega", omegas, "eta_max", vals, "delta_max", dms,
                     units={"omega": "rad/T", "delta_max": "rad/T"})


def lz_oracle(omega, delta_max, duration):
    """Asymptotic Landau-Zener transfer 1 - exp(-2 pi (Omega/2)^2 / |dDelta/dt|), dDelta/dt = 2 Delta_max / T."""
    delta_max = np.asarray(delta_max, dtype=float)
    if np.any(delta_max == 0):
        raise DomainError("delta_max = 0: no sweep")
    rate = 2 * np.abs(delta_max) / duration
    return 1.0 - np.exp(-2 * np.pi * (np.asarray(omega, dtype=float) / 2) ** 2 / rate)


# ---------------------------------------------------------------------------
# randomized benchmarking
# ---------------------------------------------------------------------------

GATE_SOURCES = ("robust", "rabi")
IDLE_ANGLE = 0.01


@dataclass
class RBResult:
    lengths: np.ndarray
    mean_population: np.ndarray
    std_population: np.ndarray
    amplitude: float
    rate: float
    offset: float
    loss: float
    loss_stderr: float
    populations: np.ndarray
    fit_ok: bool = True
    diagnostic: str = ""

    def loss_interval(self, z: float = 1.96):
        return self.loss - z * self.loss_stderr, self.loss + z * self.loss_stderr


class GateFactory:
    """Pulses for rotations by arbitrary angle about an equatorial axis."""

    def __init__(self, source: str, duration: float, family=None, amplitude_error: float = 0.0):
        if source not in GATE_SOURCES:
            raise InvalidInputError(f"gate source must be one of {GATE_SOURCES}")
        self.source = source
        self.duration = duration
        self.scale = 1.0 + amplitude_error
        if source == "robust":
            fam = family if family is not None else load_family()
            self.family = fam if isinstance(fam, FamilyInterpolant) else family_interpolant(fam)
            self.ref = TWO_PI / duration / (TWO_PI / self.family.duration)
            self.harmonics = self.family.anchor_coefficients.shape[1]
        else:
            self.harmonics = 1

    def __call__(self, angle: float, axis_angle: float) -> Pulse:
        angle = float(np.mod(angle, 2 * np.pi))
        if angle > np.pi:
            angle, axis_angle = 2 * np.pi - angle, axis_angle + np.pi
        zeros = np.zeros(self.harmonics)
        if self.source == "rabi":
            return robust_pulse(self.scale * angle / self.duration, zeros, self.duration, axis_angle)
        if angle < max(IDLE_ANGLE, self.family.angles[0]):
            return robust_pulse(0.0, zeros, self.duration, axis_angle)
        amp, coef = interpolate_family(self.family, angle)
        return robust_pulse(self.scale * amp * self.ref, np.asarray(coef) * self.ref, self.duration, axis_angle)


def rb_sequence(factory: GateFactory, n: int, rng: np.random.Generator):
    """(pi/2)_{phi+pi/2} (theta_n)_phi ... (theta_1)_phi (-pi/2)_{phi+pi/2}; returned in time order."""
    phi = rng.uniform(-np.pi / 2, np.pi / 2)
    thetas = rng.uniform(0.0, 2 * np.pi, n)
    seq = [factory(-np.pi / 2, phi + np.pi / 2)]
    seq += [factory(th, phi) for th in thetas]
    seq.append(factory(np.pi / 2, phi + np.pi / 2))
    return seq


def _decay(n, a, r, b):
    return a * r**n + b


def fit_decay(lengths, populations, sem=None):
    """Least-squares fit of A r^N + B. Returns (A, r, B, stderr_r).

    With ``sem`` (standard error of each mean) the fit is weighted and the
    parameter errors are absolute.
    """
    lengths = np.asarray(lengths, dtype=float)
    populations = np.asarray(populations, dtype=float)
    b0 = 0.5
    a0 = max(populations[0] - b0, 1e-3)
    sigma = None
    if sem is not None:
        sem = np.asarray(sem, dtype=float)
        sigma = np.maximum(sem, 1e-6 + 1e-3 * np.max(sem))
    popt, pcov = curve_fit(_decay, lengths, populations, p0=(a0, 0.98, b0), sigma=sigma,
                           absolute_sigma=sigma is not None,
                           bounds=([-2.0, 0.0, -1.0], [2.0, 1.0, 2.0]), maxfev=20000)
    err = float(np.sqrt(max(pcov[1, 1], 0.0))) if np.all(np.isfinite(pcov)) else float("nan")
    return float(popt[0]), float(popt[1]), float(popt[2]), err


def run_randomized_benchmarking(gate_source: str, lengths: Sequence[int], trials: int = 50,
                                noise: Optional[NoiseModel] = None, seed: int = 0, duration: float = 1.0,
                                amplitude_error: float = 0.0, family=None, steps: int = 512) -> RBResult:
    """Ground-state return probability of random diagonal sequences, fitted to A r^N + B.

    Without ``noise`` the evolution is closed (infinite t1, t2).
    """
    lengths = np.asarray(lengths, dtype=int)
    if lengths.size == 0 or np.any(np.diff(lengths) <= 0) or lengths[0] < 0:
        raise InvalidInputError("lengths must be non-negative and strictly ascending")
    if trials < 20:
        raise InvalidInputError("trials must be >= 20")
    if noise is None:
        noise = NoiseModel(1e30, 1e30)
    factory = GateFactory(gate_source, duration, family, amplitude_error)
    rng = np.random.default_rng(seed)
    pops = np.empty((trials, lengths.size))
    for i in range(trials):
        for j, n in enumerate(lengths):
            rho = apply_gate_sequence(rb_sequence(factory, int(n), rng), noise, steps)
            pops[i, j] = rho[1, 1].real
    mean = pops.mean(axis=0)
    std = pops.std(axis=0, ddof=1)
    try:
        a, r, b, err = fit_decay(lengths, mean, std / np.sqrt(trials))
        ok, diag = True, ""
    except (RuntimeError, ValueError) as exc:
        a = r = b = err = float("nan")
        ok, diag = False, f"fit failed: {exc}"
    return RBResult(lengths, mean, std, a, r, b, 1.0 - r, err, pops, ok, diag)


def rabi_detuning_window(duration: float = 1.0, threshold: float = 0.999, steps: int = DEFAULT_STEPS,
                         span: float = 0.2, points: int = 801):
    """Offset window (in rad/T) over which a resonant Rabi pi pulse keeps P1 > threshold."""
    p = Pulse(duration, Envelope.rectangular(math.pi / duration))
    ref = TWO_PI / duration
    deltas = np.linspace(-span, span, points) * ref
    grid = sweep_detuning(p, deltas, steps=steps)
    return contiguous_window(deltas, grid.values > threshold, 0.0)
