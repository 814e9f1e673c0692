"""Pulse families: amplitude envelopes times detuning profiles, and IQ synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import special

from .errors import AliasingError, DomainError, InvalidInputError
from .model import ControlSample, TWO_PI

ENVELOPE_KINDS = ("rectangular", "super_gaussian", "gaussian")
DETUNING_KINDS = ("constant", "linear_chirp", "fourier")

EDGE_FRACTION = 0.01


def time_grid(duration: float, steps: int):
    """Midpoints of ``steps`` equal slices of [-T/2, T/2] and the slice width."""
    dt = duration / steps
    return -0.5 * duration + (np.arange(steps) + 0.5) * dt, dt


def node_grid(duration: float, steps: int) -> np.ndarray:
    return np.linspace(-0.5 * duration, 0.5 * duration, steps + 1)


def super_gaussian_tau(T: float) -> float:
    """Width for which exp(-(T/2tau)^4) = 0.01."""
    return T / (2.0 * math.log(1.0 / EDGE_FRACTION) ** 0.25)


def gaussian_tau(T: float) -> float:
    """Width for which exp(-(T/2tau)^2) = 0.01, the same edge level as the super-Gaussian."""
    return T / (2.0 * math.sqrt(math.log(1.0 / EDGE_FRACTION)))


@dataclass(frozen=True)
class Envelope:
    kind: str
    peak_amplitude: float
    tau: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise InvalidInputError(f"unknown envelope kind {self.kind!r}")
        if not np.isfinite(self.peak_amplitude) or self.peak_amplitude < 0:
            raise InvalidInputError(f"peak amplitude must be finite and >= 0, got {self.peak_amplitude}")
        if self.kind != "rectangular" and not (self.tau and self.tau > 0):
            raise InvalidInputError(f"{self.kind} envelope needs a positive width")

    @classmethod
    def rectangular(cls, peak: float) -> "Envelope":
        return cls("rectangular", float(peak))

    @classmethod
    def super_gaussian(cls, peak: float, T: float) -> "Envelope":
        return cls("super_gaussian", float(peak), super_gaussian_tau(T))

    @classmethod
    def gaussian(cls, peak: float, T: float) -> "Envelope":
        return cls("gaussian", float(peak), gaussian_tau(T))

    @classmethod
    def with_mean(cls, kind: str, mean_amplitude: float, T: float) -> "Envelope":
        """Envelope of ``kind`` whose time-averaged amplitude over the pulse is ``mean_amplitude``."""
        if kind not in ENVELOPE_KINDS:
            raise InvalidInputError(f"unknown envelope kind {kind!r}")
        unit = cls.rectangular(1.0) if kind == "rectangular" else getattr(cls, kind)(1.0, T)
        return unit.scaled(mean_amplitude / unit.mean_amplitude(T))

    def scaled(self, factor: float) -> "Envelope":
        return replace(self, peak_amplitude=self.peak_amplitude * factor)

    def shape(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "rectangular":
            return np.ones_like(t)
        p = 4 if self.kind == "super_gaussian" else 2
        return np.exp(-((t / self.tau) ** p))

    def value(self, t):
        return self.peak_amplitude * self.shape(t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "rectangular":
            return np.zeros_like(t)
        p = 4 if self.kind == "super_gaussian" else 2
        return -p * t ** (p - 1) / self.tau**p * self.value(t)

    def area(self, T: float) -> float:
        """Closed-form integral of the envelope over [-T/2, T/2]."""
        if self.kind == "rectangular":
            return self.peak_amplitude * T
        x = T / (2.0 * self.tau)
        if self.kind == "gaussian":
            return self.peak_amplitude * math.sqrt(math.pi) * self.tau * math.erf(x)
        # 2 tau int_0^x exp(-u^4) du = tau/2 * Gamma(1/4) * P(1/4, x^4)
        return self.peak_amplitude * 0.5 * self.tau * special.gamma(0.25) * special.gammainc(0.25, x**4)

    def mean_amplitude(self, T: float) -> float:
        return self.area(T) / T


def normalize_area(envelope: Envelope, reference: Envelope, T: float) -> Envelope:
    """Rescale ``envelope`` so its area over the pulse equals that of ``reference``."""
    a = envelope.area(T)
    if a <= 0:
        raise InvalidInputError("cannot normalize an envelope with zero area")
    return envelope.scaled(reference.area(T) / a)


@dataclass(frozen=True)
class DetuningProfile:
    """Detuning Delta(t) = w_d - w_q + t dw_d/dt plus a static drive offset.

    linear_chirp: w_d - w_q = t * delta_max / T + offset, so Delta = 2 t delta_max / T + offset.
    fourier:      w_d - w_q = sum_k a_k sin(k t') + offset with t' = 2 pi t / T.
    """

    kind: str = "constant"
    delta_max: float = 0.0
    coefficients: tuple = ()
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in DETUNING_KINDS:
            raise InvalidInputError(f"unknown detuning kind {self.kind!r}")
        object.__setattr__(self, "coefficients", tuple(float(a) for a in self.coefficients))
        vals = (self.delta_max, self.offset, *self.coefficients)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidInputError("detuning parameters must be finite")

    @classmethod
    def constant(cls, offset: float = 0.0) -> "DetuningProfile":
        return cls("constant", offset=offset)

    @classmethod
    def linear_chirp(cls, delta_max: float, offset: float = 0.0) -> "DetuningProfile":
        return cls("linear_chirp", delta_max=delta_max, offset=offset)

    @classmethod
    def fourier(cls, coefficients, offset: float = 0.0) -> "DetuningProfile":
        return cls("fourier", coefficients=tuple(coefficients), offset=offset)

    def with_offset(self, offset: float) -> "DetuningProfile":
        return replace(self, offset=offset)

    def basis(self, t, T: float):
        """Rows b_j(t) and weights c_j with Delta(t) = sum_j c_j b_j(t).

        The last row is always the constant offset row.
        """
        t = np.asarray(t, dtype=float)
        rows, weights = [], []
        if self.kind == "linear_chirp":
            rows.append(2.0 * t / T)
            weights.append(self.delta_max)
        elif self.kind == "fourier":
            tp = TWO_PI * t / T
            for k, a in enumerate(self.coefficients, start=1):
                rows.append(np.sin(k * tp) + k * tp * np.cos(k * tp))
                weights.append(a)
        rows.append(np.ones_like(t))
        weights.append(self.offset)
        return np.array(rows), np.array(weights, dtype=float)

    def value(self, t, T: float):
        rows, w = self.basis(t, T)
        return w @ rows

    def derivative(self, t, T: float):
        t = np.asarray(t, dtype=float)
        if self.kind == "linear_chirp":
            return np.full_like(t, 2.0 * self.delta_max / T)
        if self.kind == "fourier":
            tp = TWO_PI * t / T
            out = np.zeros_like(t)
            for k, a in enumerate(self.coefficients, start=1):
                # d/dt' [sin(k t') + k t' cos(k t')] = 2k cos(k t') - k^2 t' sin(k t')
                out += a * (2 * k * np.cos(k * tp) - k * k * tp * np.sin(k * tp))
            return out * TWO_PI / T
        return np.zeros_like(t)

    def drive_offset(self, t, T: float):
        """w_d(t) - w_q."""
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, self.offset)
        if self.kind == "linear_chirp":
            out += t * self.delta_max / T
        elif self.kind == "fourier":
            tp = TWO_PI * t / T
            for k, a in enumerate(self.coefficients, start=1):
                out += a * np.sin(k * tp)
        return out

    def drive_offset_rate(self, t, T: float):
        t = np.asarray(t, dtype=float)
        if self.kind == "linear_chirp":
            return np.full_like(t, self.delta_max / T)
        if self.kind == "fourier":
            tp = TWO_PI * t / T
            return sum(a * k * np.cos(k * tp) for k, a in enumerate(self.coefficients, start=1)) * TWO_PI / T
        return np.zeros_like(t)


@dataclass(frozen=True)
class Pulse:
    """Complete control field on [-T/2, T/2].

    ``phase`` rotates the drive quadrature: the coupling is
    Omega/2 (cos(phase) sigma_x + sin(phase) sigma_y).
    """

    duration: float
    envelope: Envelope
    detuning: DetuningProfile = field(default_factory=DetuningProfile)
    phase: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.duration) and self.duration > 0):
            raise InvalidInputError(f"pulse duration must be positive, got {self.duration}")

    def rabi(self, t):
        return self.envelope.value(t)

    def delta(self, t):
        return self.detuning.value(t, self.duration)

    def controls(self, steps: int):
        """Midpoint grid, slice width, Omega and Delta at the midpoints."""
        t, dt = time_grid(self.duration, steps)
        return t, dt, self.rabi(t), self.delta(t)

    def with_amplitude(self, peak: float) -> "Pulse":
        return replace(self, envelope=replace(self.envelope, peak_amplitude=float(peak)))

    def with_offset(self, offset: float) -> "Pulse":
        return replace(self, detuning=self.detuning.with_offset(offset))


def sample_pulse(p: Pulse, t: float, qubit_frequency: float = 0.0) -> ControlSample:
    T = p.duration
    if not (-T / 2 - 1e-12 * T <= t <= T / 2 + 1e-12 * T):
        raise DomainError(f"t={t} outside the pulse window [{-T / 2}, {T / 2}]")
    return ControlSample(
        time=float(t),
        rabi=float(p.rabi(t)),
        detuning=float(p.delta(t)),
        drive_frequency=float(qubit_frequency + p.detuning.drive_offset(t, T)),
    )


@dataclass(frozen=True)
class IQWaveform:
    sample_rate: float
    lo_frequency: float
    times: np.ndarray
    i_samples: np.ndarray
    q_samples: np.ndarray

    def __len__(self):
        return len(self.i_samples)


def synthesize_iq(p: Pulse, lo_frequency: float, sample_rate: float,
                  qubit_frequency: float = 0.0) -> IQWaveform:
    """I + iQ = Omega(t) exp(i[(w_d(t) - w_LO) t + phase]) sampled uniformly from -T/2.

    ``sample_rate`` is in samples per unit of the pulse's time axis; frequencies
    are angular in the inverse unit.
    """
    T = p.duration
    n = math.ceil(T * sample_rate - 1e-9)
    if n < 16:
        raise InvalidInputError(f"only {n} samples per pulse; need at least 16")
    t = -0.5 * T + np.arange(n) / sample_rate
    offset = qubit_frequency + p.detuning.drive_offset(t, T) - lo_frequency
    inst = offset + t * p.detuning.drive_offset_rate(t, T)
    nyquist = math.pi * sample_rate
    worst = np.maximum(np.abs(offset), np.abs(inst))
    bad = np.flatnonzero(worst >= nyquist)
    if bad.size:
        tb = float(t[bad[0]])
        raise AliasingError(
            f"IF frequency {worst[bad[0]]:.6g} rad/unit exceeds Nyquist {nyquist:.6g} at t={tb:.6g}", time=tb)
    arg = offset * t + p.phase
    amp = p.rabi(t)
    return IQWaveform(float(sample_rate), float(lo_frequency), t, amp * np.cos(arg), amp * np.sin(arg))
