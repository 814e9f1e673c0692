"""Physical parameters, rotating-frame Hamiltonians and the instantaneous eigenframe.

Conventions used throughout the package:

* hbar = 1, every energy is an angular frequency.
* Two-level states are ordered (|1>, |0>): the excited state is (1, 0)^T and the
  ground state is (0, 1)^T, so <sigma_z> = +1 is the excited state.
* Three-level states are ordered (|0>, |1>, |2>).
* The detuning ``Delta`` is drive minus qubit,
  Delta(t) = w_d(t) - w_q + t * dw_d/dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateSpectrumError, DomainError, InvalidInputError

TWO_PI = 2.0 * np.pi

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)

# two-level basis indices
EXCITED = 0
GROUND = 1

KET_0 = np.array([0, 1], dtype=complex)
KET_1 = np.array([1, 0], dtype=complex)


@dataclass(frozen=True)
class UnitsConvention:
    """Pulse duration and the matching 2*pi Rabi frequency."""

    duration: float = 1.0

    def __post_init__(self):
        if not self.duration > 0:
            raise InvalidInputError(f"duration must be positive, got {self.duration}")

    @property
    def reference_rabi(self) -> float:
        return TWO_PI / self.duration

    def to_rabi_units(self, omega):
        """Angular frequency -> multiples of Omega_2pi."""
        return np.asarray(omega) / self.reference_rabi

    def from_rabi_units(self, x):
        return np.asarray(x) * self.reference_rabi


@dataclass(frozen=True)
class TwoLevelModel:
    qubit_frequency: float = 0.0
    t1: Optional[float] = None
    t2: Optional[float] = None

    def __post_init__(self):
        for name in ("t1", "t2"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise InvalidInputError(f"{name} must be positive, got {v}")
        if self.t1 is not None and self.t2 is not None and self.t2 > 2 * self.t1 * (1 + 1e-12):
            raise InvalidInputError(f"unphysical decoherence: t2={self.t2} > 2*t1={2 * self.t1}")

    @property
    def levels(self) -> int:
        return 2


@dataclass(frozen=True)
class ThreeLevelModel:
    """Transmon truncated to three levels.

    ``anharmonicity`` is E_C as an angular frequency, so that w_12 = w_01 - E_C.
    ``dipole_ratio`` is Omega_12 / Omega_01; there is no direct 0-2 coupling.
    """

    anharmonicity: float
    dipole_ratio: float = -math.sqrt(2.0)
    base: TwoLevelModel = TwoLevelModel()

    def __post_init__(self):
        if not np.isfinite(self.anharmonicity) or not np.isfinite(self.dipole_ratio):
            raise InvalidInputError("three-level parameters must be finite")

    @property
    def levels(self) -> int:
        return 3

    @property
    def qubit_frequency(self) -> float:
        return self.base.qubit_frequency

    @property
    def transition_12(self) -> float:
        return self.base.qubit_frequency - self.anharmonicity


@dataclass(frozen=True)
class ControlSample:
    time: float
    rabi: float
    detuning: float
    drive_frequency: float = 0.0


@dataclass(frozen=True)
class EigenFrame:
    energy_minus: float
    energy_plus: float
    mixing_angle: float
    eigvec_minus: np.ndarray
    eigvec_plus: np.ndarray


def _check_finite(*values):
    for v in values:
        if not np.isfinite(v):
            raise InvalidInputError(f"non-finite control value {v!r}")


def hamiltonian_2lvl(sample: ControlSample) -> np.ndarray:
    """H = 1/2 [[-Delta, Omega], [Omega, Delta]] in the (|1>, |0>) basis."""
    _check_finite(sample.rabi, sample.detuning)
    om, de = float(sample.rabi), float(sample.detuning)
    return 0.5 * np.array([[-de, om], [om, de]], dtype=complex)


def detunings_3lvl(detuning: float, model: ThreeLevelModel) -> tuple[float, float]:
    """Transition-minus-drive detunings (Delta_01, Delta_12) for a drive detuning ``detuning``.

    Delta_01 = w_01 - w_d = -detuning and Delta_12 = w_12 - w_d = Delta_01 - E_C.
    """
    d01 = -float(detuning)
    return d01, d01 - model.anharmonicity


def hamiltonian_3lvl(sample: ControlSample, model: ThreeLevelModel) -> np.ndarray:
    """Rotating-frame transmon Hamiltonian in the (|0>, |1>, |2>) basis.

    [[-D01, O01/2, 0], [O01/2, 0, O12/2], [0, O12/2, D12]] with O12 = lambda * O01.
    """
    _check_finite(sample.rabi, sample.detuning, model.anharmonicity, model.dipole_ratio)
    d01, d12 = detunings_3lvl(sample.detuning, model)
    o01 = float(sample.rabi)
    o12 = model.dipole_ratio * o01
    return np.array(
        [[-d01, 0.5 * o01, 0.0], [0.5 * o01, 0.0, 0.5 * o12], [0.0, 0.5 * o12, d12]],
        dtype=complex,
    )


def mixing_angle(rabi, detuning):
    """Theta with tan(Theta) = (sqrt(Omega^2 + Delta^2) + Delta) / Omega, in [0, pi/2].

    Written as atan2 so the Omega -> 0 limits are exact.
    """
    rabi = np.asarray(rabi, dtype=float)
    detuning = np.asarray(detuning, dtype=float)
    r = np.hypot(rabi, detuning)
    # (r + D)/O == O/(r - D); pick the well-conditioned form
    num = np.where(detuning >= 0, r + detuning, rabi)
    den = np.where(detuning >= 0, rabi, r - detuning)
    return np.arctan2(num, den)


def eigenframe(sample: ControlSample) -> EigenFrame:
    _check_finite(sample.rabi, sample.detuning)
    om, de = float(sample.rabi), float(sample.detuning)
    if om < 0:
        raise DomainError("Rabi frequency must be non-negative; absorb its phase into the frame")
    if om == 0.0 and de == 0.0:
        raise DegenerateSpectrumError("Omega = Delta = 0: eigenbasis undefined")
    r = math.hypot(om, de)
    theta = float(mixing_angle(om, de))
    c, s = math.cos(theta), math.sin(theta)
    # (|1>, |0>) ordering: |E-> = cos T |0> - sin T |1>, |E+> = sin T |0> + cos T |1>
    vm = np.array([-s, c], dtype=complex)
    vp = np.array([c, s], dtype=complex)
    return EigenFrame(-0.5 * r, 0.5 * r, theta, vm, vp)


def frame_phase(pulse, t: float, steps: int = 2048) -> float:
    """Accumulated phase phi(t) = int_{-T/2}^{t} Delta between drive and qubit frames.

    The integral is the midpoint sum on the propagator grid; ``t`` is rounded to
    the nearest grid node.
    """
    T = pulse.duration
    if not (-T / 2 - 1e-12 * T <= t <= T / 2 + 1e-12 * T):
        raise DomainError(f"t={t} outside the pulse window [{-T / 2}, {T / 2}]")
    phases = frame_phases(pulse, steps)
    j = int(round((t + T / 2) / (T / steps)))
    return float(phases[min(max(j, 0), steps)])


def frame_phases(pulse, steps: int) -> np.ndarray:
    """phi at the ``steps + 1`` grid nodes, starting at 0 at t = -T/2."""
    from .pulses import time_grid

    t, dt = time_grid(pulse.duration, steps)
    delta = pulse.detuning.value(t, pulse.duration)
    return np.concatenate([[0.0], np.cumsum(delta) * dt])


def z_rotation(angle: float) -> np.ndarray:
    """exp(-i angle sigma_z / 2)."""
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
