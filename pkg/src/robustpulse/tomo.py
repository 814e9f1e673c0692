"""Pauli decomposition, simulated state/process tomography and process fidelity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import InvalidInputError, NumericalError, UnsupportedDimensionError
from .model import IDENTITY, KET_0, KET_1, PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z
from .propagator import DEFAULT_STEPS, NoiseModel, propagate_open, propagate_unitary
from .pulses import Pulse

PAULI_LABELS = ("I", "X", "Y", "Z")

# input states for process tomography
TOMO_INPUTS = (
    KET_0,
    KET_1,
    (KET_0 + KET_1) / np.sqrt(2),
    (KET_0 + 1j * KET_1) / np.sqrt(2),
)


def _rot(axis, angle):
    return np.cos(angle / 2) * IDENTITY - 1j * np.sin(angle / 2) * axis


# pre-measurement rotations: identity, (pi/2)_y, (pi/2)_x; sigma_z is read out afterwards
SETTINGS = (IDENTITY, _rot(SIGMA_Y, np.pi / 2), _rot(SIGMA_X, np.pi / 2))
# after (pi/2)_y the readout is -<sigma_x>; after (pi/2)_x it is +<sigma_y>
SETTING_SIGNS = np.array([1.0, -1.0, 1.0])


@dataclass(frozen=True)
class PauliDecomposition:
    """U = c0 1 - i (cx sx + cy sy + cz sz) with the global phase fixed."""

    c0: float
    cx: float
    cy: float
    cz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.cx, self.cy, self.cz])

    def unitary(self) -> np.ndarray:
        return self.c0 * IDENTITY - 1j * (self.cx * SIGMA_X + self.cy * SIGMA_Y + self.cz * SIGMA_Z)


@dataclass(frozen=True)
class ProcessMatrix:
    chi: np.ndarray

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=complex)
        if chi.shape != (4, 4):
            raise InvalidInputError("process matrix must be 4x4")
        object.__setattr__(self, "chi", chi)

    def element(self, label: str) -> float:
        """Diagonal entry by Pauli pair label, e.g. 'XX'."""
        i = PAULI_LABELS.index(label[0])
        j = PAULI_LABELS.index(label[1])
        return self.chi[i, j].real if i == j else self.chi[i, j]

    @property
    def diagonal(self) -> np.ndarray:
        return self.chi.diagonal().real

    def is_physical(self, tol: float = 1e-9) -> bool:
        h = np.allclose(self.chi, self.chi.conj().T, atol=tol)
        return h and np.linalg.eigvalsh(self.chi).min() >= -tol and abs(np.trace(self.chi) - 1) < tol


def pauli_decompose(u) -> PauliDecomposition:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise UnsupportedDimensionError("Pauli decomposition needs a 2x2 matrix")
    if np.linalg.norm(u.conj().T @ u - IDENTITY) >= 1e-6:
        raise InvalidInputError("matrix is not unitary")
    u = u / np.sqrt(np.linalg.det(u))
    c = np.array([np.trace(u) / 2] + [1j * np.trace(s @ u) / 2 for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])
    c = c.real
    lead = c[0] if abs(c[0]) > 1e-12 else next((x for x in c[1:] if abs(x) > 1e-12), 1.0)
    if lead < 0:
        c = -c
    return PauliDecomposition(*map(float, c))


def chi_from_unitary(u) -> ProcessMatrix:
    u = np.asarray(u, dtype=complex)
    e = np.array([np.trace(p @ u) / 2 for p in PAULIS])
    return ProcessMatrix(np.outer(e, e.conj()))


def project_cptp(chi) -> np.ndarray:
    """Hermitize, clip negative eigenvalues and renormalize the trace."""
    chi = np.asarray(chi, dtype=complex)
    chi = 0.5 * (chi + chi.conj().T)
    w, v = np.linalg.eigh(chi)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        raise NumericalError("process matrix has no positive spectrum")
    out = (v * w) @ v.conj().T
    return out / np.trace(out).real


def project_state(bloch) -> np.ndarray:
    """Nearest physical Bloch vector (shrinks it onto the unit ball)."""
    bloch = np.asarray(bloch, dtype=float)
    r = np.linalg.norm(bloch)
    return bloch / r if r > 1 else bloch


def density_from_bloch(bloch) -> np.ndarray:
    x, y, z = bloch
    return 0.5 * (IDENTITY + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)


def measure_bloch(rho, sigma: float = 0.0, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """State tomography with the three settings; returns the reconstructed (x, y, z)."""
    raw = np.array([np.trace(SIGMA_Z @ r @ rho @ r.conj().T).real for r in SETTINGS])
    if sigma > 0:
        rng = np.random.default_rng() if rng is None else rng
        raw = raw + rng.normal(0.0, sigma, 3)
    z, x, y = raw * SETTING_SIGNS
    return np.array([x, y, z])


def _chi_design() -> np.ndarray:
    rows = []
    for psi in TOMO_INPUTS:
        rho = np.outer(psi, psi.conj())
        rows.append(np.stack([(em @ rho @ en.conj().T).ravel() for em in PAULIS for en in PAULIS], axis=1))
    return np.vstack(rows)


_DESIGN = _chi_design()


def chi_from_outputs(outputs) -> np.ndarray:
    """Linear inversion of the four output density matrices to a raw chi."""
    b = np.concatenate([np.asarray(o, dtype=complex).ravel() for o in outputs])
    if np.linalg.cond(_DESIGN) > 1e8:
        raise NumericalError("tomography inversion is singular")
    sol, *_ = np.linalg.lstsq(_DESIGN, b, rcond=None)
    return sol.reshape(4, 4)


Gate = Union[Pulse, np.ndarray, Callable]


def _channel(gate: Gate, noise: Optional[NoiseModel], steps: int):
    if isinstance(gate, Pulse):
        if noise is None:
            u = propagate_unitary(gate, steps=steps, frame="qubit_rotating", check_convergence=False).final_unitary
            return lambda rho: u @ rho @ u.conj().T
        from .model import frame_phases
        from .propagator import frame_operator

        f = frame_operator(frame_phases(gate, steps)[-1])

        def run(rho):
            out = propagate_open(gate, noise=noise, steps=steps, rho0=rho).final_density
            return f @ out @ f.conj().T

        return run
    if callable(gate):
        return gate
    u = np.asarray(gate, dtype=complex)
    if u.shape != (2, 2):
        raise UnsupportedDimensionError("process tomography is for two-level gates")
    return lambda rho: u @ rho @ u.conj().T


def simulate_qpt(gate: Gate, noise: Optional[NoiseModel] = None, readout_noise: bool = False,
                 rng: Optional[np.random.Generator] = None, steps: int = DEFAULT_STEPS,
                 project: bool = True) -> ProcessMatrix:
    """Process tomography of a pulse (qubit frame), a 2x2 unitary or a channel rho -> rho'.

    With ``noise`` a pulse evolves under the Lindblad model. ``readout_noise`` adds
    Gaussian noise of the noise model's readout_sigma (default 0.003) to each
    measured expectation value.
    """
    channel = _channel(gate, noise, steps)
    sigma = 0.0
    if readout_noise:
        sigma = noise.readout_sigma if noise is not None else NoiseModel(1.0, 1.0).readout_sigma
    outputs = []
    for psi in TOMO_INPUTS:
        rho = channel(np.outer(psi, psi.conj()))
        bloch = project_state(measure_bloch(rho, sigma, rng))
        outputs.append(density_from_bloch(bloch))
    chi = chi_from_outputs(outputs)
    return ProcessMatrix(project_cptp(chi) if project else chi)


def process_fidelity(chi_th, chi_exp) -> float:
    a = chi_th.chi if isinstance(chi_th, ProcessMatrix) else np.asarray(chi_th)
    b = chi_exp.chi if isinstance(chi_exp, ProcessMatrix) else np.asarray(chi_exp)
    return float(np.real(np.trace(a @ b)))


def gate_fidelity(u, v) -> float:
    """|tr(U^dag V)/2|^2: the process fidelity between two unitaries."""
    return float(abs(np.trace(np.asarray(u).conj().T @ np.asarray(v)) / 2) ** 2)
