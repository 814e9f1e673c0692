import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from robustpulse.errors import AliasingError, DomainError, InvalidInputError
from robustpulse.pulses import (DetuningProfile, Envelope, Pulse, gaussian_tau, normalize_area, sample_pulse,
                                super_gaussian_tau, synthesize_iq)

T = 1.0


def test_sample_pulse_examples():
    p = Pulse(T, Envelope.rectangular(3.0))
    s = sample_pulse(p, 0.37)
    assert s.rabi == 3.0 and s.detuning == 0.0
    sg = Pulse(T, Envelope.super_gaussian(2.0, T))
    assert sample_pulse(sg, 0.0).rabi == pytest.approx(2.0)
    assert sample_pulse(sg, T / 2).rabi == pytest.approx(0.02)
    assert sample_pulse(sg, -T / 2).rabi == pytest.approx(0.02)
    ch = Pulse(T, Envelope.rectangular(1.0), DetuningProfile.linear_chirp(8.0))
    assert sample_pulse(ch, T / 4).detuning == pytest.approx(4.0)
    with pytest.raises(DomainError):
        sample_pulse(ch, 0.51)


def test_super_gaussian_width_and_area():
    assert super_gaussian_tau(200e-9) == pytest.approx(68.3e-9, rel=1e-3)
    assert super_gaussian_tau(1.0) == pytest.approx(0.3413, abs=1e-4)
    e = Envelope.super_gaussian(1.0, T)
    assert e.area(T) / T == pytest.approx(0.60, abs=0.02)
    num, _ = quad(e.value, -T / 2, T / 2, epsabs=1e-14)
    assert e.area(T) == pytest.approx(num, rel=1e-12)


def test_gaussian_area_closed_form():
    g = Envelope.gaussian(2.0, T)
    num, _ = quad(g.value, -T / 2, T / 2, epsabs=1e-14)
    assert g.area(T) == pytest.approx(num, rel=1e-12)
    assert g.shape(T / 2) == pytest.approx(0.01)
    assert gaussian_tau(T) < super_gaussian_tau(T)


def test_normalize_area():
    r = Envelope.rectangular(2.0)
    assert normalize_area(r, Envelope.rectangular(2.0), T) == r
    sg = Envelope.super_gaussian(3.0, T)
    g = normalize_area(Envelope.gaussian(1.0, T), sg, T)
    assert g.peak_amplitude > sg.peak_amplitude
    a, _ = quad(g.value, -T / 2, T / 2, epsabs=1e-14)
    b, _ = quad(sg.value, -T / 2, T / 2, epsabs=1e-14)
    assert a == pytest.approx(b, abs=1e-10)
    with pytest.raises(InvalidInputError):
        normalize_area(Envelope.rectangular(0.0), sg, T)


def test_with_mean():
    for kind in ("rectangular", "super_gaussian", "gaussian"):
        e = Envelope.with_mean(kind, 3.5, T)
        assert e.mean_amplitude(T) == pytest.approx(3.5)
    with pytest.raises(InvalidInputError):
        Envelope.with_mean("sech", 1.0, T)


@given(st.sampled_from(["rectangular", "super_gaussian", "gaussian"]), st.floats(0, 100),
       st.floats(-0.5, 0.5))
def test_envelope_bounds(kind, peak, t):
    e = Envelope.rectangular(peak) if kind == "rectangular" else getattr(Envelope, kind)(peak, T)
    v = e.value(t)
    assert 0 <= v <= peak * (1 + 1e-15)


coef = st.lists(st.floats(-20, 20), min_size=1, max_size=5)


@given(coef, st.floats(0.0, 0.5))
def test_odd_detuning(cs, t):
    for prof in (DetuningProfile.fourier(cs), DetuningProfile.linear_chirp(cs[0])):
        assert prof.value(-t, T) == -prof.value(t, T)


@given(coef, st.floats(-5, 5), st.floats(-0.45, 0.45))
def test_detuning_matches_drive_frequency(cs, offset, t):
    """Delta = (w_d - w_q) + t dw_d/dt with the derivative taken by finite differences."""
    for prof in (DetuningProfile.fourier(cs, offset), DetuningProfile.linear_chirp(cs[0], offset)):
        h = 1e-6
        rate = (prof.drive_offset(t + h, T) - prof.drive_offset(t - h, T)) / (2 * h)
        expect = prof.drive_offset(t, T) + t * rate
        assert prof.value(t, T) == pytest.approx(expect, rel=1e-6, abs=1e-6 * (1 + max(map(abs, cs))))


@given(coef, st.floats(-0.45, 0.45))
def test_analytic_derivatives(cs, t):
    prof = DetuningProfile.fourier(cs)
    h = 1e-6
    fd = (prof.value(t + h, T) - prof.value(t - h, T)) / (2 * h)
    assert prof.derivative(t, T) == pytest.approx(fd, rel=1e-5, abs=1e-4)
    e = Envelope.super_gaussian(2.0, T)
    fd = (e.value(t + h) - e.value(t - h)) / (2 * h)
    assert e.derivative(t) == pytest.approx(fd, rel=1e-5, abs=1e-7)


def test_iq_examples():
    p = Pulse(T, Envelope.rectangular(2.0))
    wf = synthesize_iq(p, lo_frequency=0.0, sample_rate=200.0)
    assert len(wf) == 200 and np.allclose(wf.q_samples, 0) and np.allclose(wf.i_samples, 2.0)
    ch = Pulse(T, Envelope.super_gaussian(3.0, T), DetuningProfile.linear_chirp(60.0))
    wf = synthesize_iq(ch, lo_frequency=-100.0, sample_rate=1000.0)
    assert len(wf) == math.ceil(T * 1000.0)
    assert np.allclose(wf.i_samples**2 + wf.q_samples**2, ch.rabi(wf.times) ** 2)


def test_iq_instantaneous_frequency():
    ch = Pulse(T, Envelope.rectangular(1.0), DetuningProfile.linear_chirp(60.0))
    lo = -150.0
    wf = synthesize_iq(ch, lo_frequency=lo, sample_rate=20000.0)
    ph = np.unwrap(np.angle(wf.i_samples + 1j * wf.q_samples))
    dt = 1 / 20000.0
    slope = np.diff(ph) / dt
    tm = wf.times[:-1] + dt / 2
    expect = ch.detuning.drive_offset(tm, T) - lo + tm * ch.detuning.drive_offset_rate(tm, T)
    assert np.abs(slope - expect).max() < 1e-3 * np.abs(expect).max()


def test_iq_errors():
    p = Pulse(T, Envelope.rectangular(1.0), DetuningProfile.linear_chirp(200.0))
    with pytest.raises(InvalidInputError):
        synthesize_iq(p, 0.0, sample_rate=10.0)
    with pytest.raises(AliasingError) as err:
        synthesize_iq(p, 0.0, sample_rate=50.0)
    assert err.value.time is not None
