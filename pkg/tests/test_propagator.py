import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from robustpulse.analysis import chirp_pulse
from robustpulse.errors import InvalidInputError, ResolutionError, UnsupportedDimensionError
from robustpulse.model import (TWO_PI, ControlSample, ThreeLevelModel, TwoLevelModel, hamiltonian_2lvl,
                               mixing_angle)
from robustpulse.propagator import (NoiseModel, bloch_trajectory, excited_population, level_populations,
                                    propagate_interval, propagate_many, propagate_open, propagate_unitary)
from robustpulse.pulses import DetuningProfile, Envelope, Pulse

O = TWO_PI
T = 1.0


def _ode_unitary(p):
    def rhs(t, y):
        h = hamiltonian_2lvl(ControlSample(t, p.rabi(t), p.delta(t)))
        h[0, 1] *= np.exp(-1j * p.phase)
        h[1, 0] *= np.exp(1j * p.phase)
        return (-1j * h @ y.reshape(2, 2)).ravel()

    sol = solve_ivp(rhs, (-T / 2, T / 2), np.eye(2, dtype=complex).ravel(), rtol=1e-11, atol=1e-12,
                    method="DOP853")
    return sol.y[:, -1].reshape(2, 2)


def test_rabi_pi_pulse():
    p = Pulse(T, Envelope.rectangular(math.pi / T))
    assert excited_population(propagate_unitary(p).final_unitary) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0.2, 3.0), st.floats(-3.0, 3.0))
@settings(max_examples=20, deadline=None)
def test_detuned_rabi_formula(om, de):
    om, de = om * O, de * O
    p = Pulse(T, Envelope.rectangular(om), DetuningProfile.constant(de))
    r = math.hypot(om, de)
    expect = om**2 / r**2 * math.sin(r * T / 2) ** 2
    assert excited_population(propagate_unitary(p).final_unitary) == pytest.approx(expect, abs=1e-10)


def test_super_gaussian_transfer():
    p = chirp_pulse("super_gaussian", 2.5 * O, 10.8 * O)
    assert excited_population(propagate_unitary(p).final_unitary) > 0.999


@pytest.mark.parametrize("phase", [0.0, 0.7])
def test_matches_ode_oracle(phase):
    p = chirp_pulse("super_gaussian", 2.45 * O, 20 * O, phase=phase)
    u = propagate_unitary(p, steps=4096).final_unitary
    assert np.abs(u - _ode_unitary(p)).max() < 5e-6


def test_unitarity_along_trajectory():
    p = chirp_pulse("gaussian", 4 * O, 15 * O)
    res = propagate_unitary(p, trajectory=True)
    err = np.abs(np.einsum("nji,njk->nik", res.unitaries.conj(), res.unitaries) - np.eye(2)).max()
    assert err < 1e-9
    u3 = propagate_unitary(p, ThreeLevelModel(60 * O), trajectory=True).unitaries
    assert np.abs(np.einsum("nji,njk->nik", u3.conj(), u3) - np.eye(3)).max() < 1e-9


def test_composition():
    p = Pulse(T, Envelope.super_gaussian(3 * O, T), DetuningProfile.fourier([2 * O, -O, 0.5 * O], 0.3 * O), 0.4)
    full = propagate_unitary(p, steps=2048, check_convergence=False).final_unitary
    a = propagate_interval(p, -T / 2, 0.0, steps=1024)
    b = propagate_interval(p, 0.0, T / 2, steps=1024)
    assert np.abs(b @ a - full).max() < 1e-9
    m = ThreeLevelModel(40 * O)
    full3 = propagate_unitary(p, m, check_convergence=False).final_unitary
    a3 = propagate_interval(p, -T / 2, 0.0, m, 1024)
    b3 = propagate_interval(p, 0.0, T / 2, m, 1024)
    assert np.abs(b3 @ a3 - full3).max() < 1e-9


@pytest.mark.parametrize("pulse", [chirp_pulse("super_gaussian", 2.5 * O, 10.8 * O),
                                   chirp_pulse("rectangular", 1.0 * O, 1.64 * O)])
def test_second_order_convergence(pulse):
    us = {n: propagate_unitary(pulse, steps=n, check_convergence=False).final_unitary
          for n in (256, 512, 1024, 16384, 32768)}
    ref = (4 * us[32768] - us[16384]) / 3
    errs = [np.linalg.norm(us[n] - ref) for n in (256, 512, 1024)]
    assert errs[0] / errs[1] >= 4.0 and errs[1] / errs[2] >= 4.0


def test_resolution_error_and_step_floor():
    p = chirp_pulse("rectangular", O, 400 * O)
    with pytest.raises(ResolutionError):
        propagate_unitary(p, steps=64)
    with pytest.raises(InvalidInputError):
        propagate_unitary(p, steps=32)


def test_batch_matches_single():
    pulses = [chirp_pulse("super_gaussian", a * O, d * O, offset=0.2 * O) for a in (1, 2.5) for d in (3, 9)]
    batch = propagate_many(pulses)
    for p, u in zip(pulses, batch):
        assert np.abs(u - propagate_unitary(p, check_convergence=False).final_unitary).max() < 1e-13


def test_three_level_decoupled_limit():
    p = chirp_pulse("super_gaussian", 2 * O, 6 * O)
    m = ThreeLevelModel(50 * O, dipole_ratio=0.0)
    pops3 = level_populations(propagate_unitary(p, m).final_unitary)
    pops2 = level_populations(propagate_unitary(p).final_unitary)
    assert pops3[2] < 1e-14
    assert np.allclose(pops3[:2], pops2, atol=1e-10)


def test_free_decay_and_dephasing():
    t1, t2 = 3.0, 2.5
    idle = Pulse(T, Envelope.rectangular(0.0))
    rho1 = np.diag([1.0, 0.0]).astype(complex)
    out = propagate_open(idle, noise=NoiseModel(t1, t2), rho0=rho1).final_density
    assert out[0, 0].real == pytest.approx(math.exp(-T / t1), rel=1e-12)
    plus = 0.5 * np.ones((2, 2), complex)
    out = propagate_open(idle, noise=NoiseModel(t1, t2), rho0=plus).final_density
    assert abs(out[0, 1]) == pytest.approx(0.5 * math.exp(-T / t2), rel=1e-12)


def test_noise_model_validation():
    assert NoiseModel(7.0, 5.0).dephasing_rate == pytest.approx(1 / 5 - 1 / 14)
    with pytest.raises(InvalidInputError):
        NoiseModel(1.0, 3.0)


def _lindblad_ode(p, rho0, t1, t2):
    g1 = 1 / t1
    gphi = 1 / t2 - 1 / (2 * t1)
    sm = np.array([[0, 0], [1, 0]], complex)  # |1> -> |0> in (|1>, |0>) order
    sz = np.diag([1.0, -1.0]).astype(complex)

    def d(l, r):
        return l @ r @ l.conj().T - 0.5 * (l.conj().T @ l @ r + r @ l.conj().T @ l)

    def rhs(t, y):
        r = y.reshape(2, 2)
        h = hamiltonian_2lvl(ControlSample(t, p.rabi(t), p.delta(t)))
        return (-1j * (h @ r - r @ h) + g1 * d(sm, r) + 0.5 * gphi * d(sz, r)).ravel()

    sol = solve_ivp(rhs, (-T / 2, T / 2), rho0.ravel(), rtol=1e-10, atol=1e-12, method="DOP853")
    return sol.y[:, -1].reshape(2, 2)


def test_open_matches_lindblad_ode():
    p = chirp_pulse("super_gaussian", 2.5 * O, 10.8 * O)
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    out = propagate_open(p, noise=NoiseModel(2.0, 1.5), rho0=rho0, steps=4096).final_density
    assert np.abs(out - _lindblad_ode(p, rho0, 2.0, 1.5)).max() < 1e-5


def test_open_invariants_and_closed_limit():
    p = chirp_pulse("gaussian", 3 * O, 8 * O, phase=0.3)
    res = propagate_open(p, noise=NoiseModel(1.5, 1.0), trajectory=True)
    rhos = res.densities
    assert np.abs(np.trace(rhos, axis1=1, axis2=2) - 1).max() < 1e-9
    assert np.abs(rhos - np.conj(np.swapaxes(rhos, 1, 2))).max() < 1e-12
    assert np.linalg.eigvalsh(rhos).min() > -1e-9
    closed = propagate_unitary(p, check_convergence=False).final_unitary
    psi = closed[:, 1]
    ideal = propagate_open(p, noise=NoiseModel(1e30, 1e30)).final_density
    assert np.abs(ideal - np.outer(psi, psi.conj())).max() < 1e-12
    with pytest.raises(UnsupportedDimensionError):
        propagate_open(p, ThreeLevelModel(10.0), NoiseModel(1.0, 1.0))


def _pi_pulse_loss():
    p = Pulse(T, Envelope.rectangular(math.pi / T))
    noise = NoiseModel(7000 / 120, 5000 / 120)
    return 1 - propagate_open(p, noise=noise).final_density[0, 0].real


def test_pi_pulse_decoherence_regression():
    # T = 120 ns, T1 = 7 us, T2 = 5 us
    assert _pi_pulse_loss() == pytest.approx(0.010222, abs=2e-6)


@pytest.mark.xfail(strict=True, reason="a single Lindblad pi pulse loses ~1.0%, below the 1.5-4.5% band")
def test_pi_pulse_decoherence_band():
    assert 0.015 <= _pi_pulse_loss() <= 0.045


def test_bloch_trajectory_idle_and_frames():
    idle = Pulse(T, Envelope.rectangular(0.0))
    tr = bloch_trajectory(propagate_unitary(idle, trajectory=True))
    assert np.allclose(tr[:, 1:], [0, 0, -1])
    p = chirp_pulse("super_gaussian", 2.5 * O, 10.8 * O)
    res = propagate_unitary(p, trajectory=True)
    drive = bloch_trajectory(res, "drive_rotating")
    qubit = bloch_trajectory(res, "qubit_rotating")
    assert np.allclose(drive[[0, -1]], qubit[[0, -1]], atol=1e-9)
    assert not np.allclose(drive[len(drive) // 4], qubit[len(qubit) // 4], atol=1e-3)
    # z is frame independent
    assert np.allclose(drive[:, 3], qubit[:, 3])
    back = bloch_trajectory(propagate_unitary(p, trajectory=True, frame="qubit_rotating"), "drive_rotating")
    assert np.allclose(back, drive, atol=1e-12)


def test_bloch_trajectory_follows_adiabatic_path():
    p = chirp_pulse("super_gaussian", 8 * O, 40 * O)
    res = propagate_unitary(p, steps=8192, trajectory=True)
    tr = bloch_trajectory(res, "drive_rotating")
    th = mixing_angle(p.rabi(tr[:, 0]), p.delta(tr[:, 0]))
    ideal = np.column_stack([-np.sin(2 * th), np.zeros_like(th), -np.cos(2 * th)])
    assert np.linalg.norm(tr[:, 1:] - ideal, axis=1).max() < 0.2


def test_bloch_trajectory_errors():
    p = chirp_pulse("super_gaussian", 2 * O, 5 * O)
    with pytest.raises(UnsupportedDimensionError):
        bloch_trajectory(propagate_unitary(p, ThreeLevelModel(50.0), trajectory=True))
    with pytest.raises(InvalidInputError):
        bloch_trajectory(propagate_unitary(p))
