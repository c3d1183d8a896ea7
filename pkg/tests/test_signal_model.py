import math

import numpy as np
import pytest

from cfarim.errors import EmptyConfig, TargetOutOfBand, ZeroPowerReference
from cfarim.signal_model import (
    C,
    ComplexSignal,
    InterferenceSpec,
    SweepConfig,
    Target,
    add_noise,
    interference_gate,
    synth_beat,
    synth_interference,
    synth_scene,
)


def test_sweep_invariants():
    ok = dict(f0=76.7e9, K=6e12, T=100e-6, fs=40e6, f_cut=10e6, n_samples=4000)
    SweepConfig(**ok)
    for key, bad in [("K", 0.0), ("T", 0.0), ("fs", -1.0), ("f_cut", 30e6), ("f_cut", 0.0), ("n_samples", 4001)]:
        with pytest.raises(ValueError):
            SweepConfig(**{**ok, key: bad})


def test_max_range_matches_cutoff(victim):
    assert victim.beat_frequency(victim.max_range) == pytest.approx(victim.f_cut)
    assert victim.max_range == pytest.approx(249.8, abs=0.1)


def test_empty_target_list_gives_zeros(victim):
    s = synth_beat([], victim)
    assert len(s) == victim.n_samples
    assert not s.samples.any()


def test_zero_samples_rejected():
    cfg = SweepConfig(76.7e9, 6e12, 100e-6, 40e6, 10e6, 0)
    with pytest.raises(EmptyConfig):
        synth_beat([Target(10.0)], cfg)


def test_out_of_band_target(victim):
    with pytest.raises(TargetOutOfBand):
        synth_beat([Target(260.0)], victim)


def test_tone_peaks_at_negative_beat_bin(victim):
    s = synth_beat([Target(30.0)], victim).samples
    fb = 2 * victim.K * 30.0 / C
    assert fb == pytest.approx(1.2008307e6, rel=1e-6)
    # independent DFT on a coarse grid around the expected tone
    n = np.arange(s.size)
    freqs = np.linspace(-2e6, 2e6, 4001)
    mags = np.abs(np.exp(-2j * np.pi * np.outer(freqs, n) / victim.fs) @ s)
    peak = freqs[np.argmax(mags)]
    assert abs(peak + fb) <= 1e3


def test_linearity(victim):
    a = [Target(30.0, 1.0), Target(80.0, 0.1j)]
    b = [Target(150.0, 0.7)]
    both = synth_beat(a + b, victim).samples
    np.testing.assert_allclose(both, synth_beat(a, victim).samples + synth_beat(b, victim).samples, atol=1e-12)


def test_parseval_well_separated_tones(victim):
    tg = [Target(30.0, 1.0), Target(80.0, 0.1), Target(150.0, 0.7)]
    p = synth_beat(tg, victim).power
    assert p == pytest.approx(1 + 0.01 + 0.49, rel=0.01)


def test_identical_aggressor_is_dc(victim):
    spec = InterferenceSpec(victim, 0.0, 1.0)
    s = synth_interference(spec, victim).samples
    assert np.allclose(np.abs(s), 1.0)
    # constant phase: zero instantaneous frequency
    assert np.ptp(np.angle(s)) < 1e-9


def test_gate_support_duration(victim):
    agg = SweepConfig(76.7e9, 12e12, 40e-6, 40e6, 10e6, 0)
    spec = InterferenceSpec(agg, 15e-6, 1.0)
    s = synth_interference(spec, victim).samples
    support = np.count_nonzero(s) / victim.fs
    # |f_inst| <= f_cut around the crossing at t = 30 us, well inside the overlap window
    expected = 2 * victim.f_cut / abs(agg.K - victim.K)
    assert support == pytest.approx(expected, abs=1.5 / victim.fs)


def test_gate_clipped_to_aggressor_activity(victim):
    # slope difference small enough that the gate outlives the 5 us aggressor chirp
    crossing, half = 50e-6, 2.5e-6
    f0a = victim.f0 + victim.K * crossing - 7e12 * half
    agg = SweepConfig(f0a, 7e12, 2 * half, 40e6, 10e6, 0)
    t_start = crossing - half
    s = synth_interference(InterferenceSpec(agg, t_start, 1.0), victim).samples
    t = victim.times()
    on = (t >= t_start) & (t <= t_start + agg.T)
    assert np.count_nonzero(s) == np.count_nonzero(on)


def test_interference_zero_outside_gate(victim):
    agg = SweepConfig(76.7e9, 18e12, 40e-6, 40e6, 10e6, 0)
    spec = InterferenceSpec(agg, 46.7e-6, 3.0 - 1j)
    s = synth_interference(spec, victim).samples
    gate = interference_gate(spec, victim)
    assert not s[~gate].any()
    assert np.allclose(np.abs(s[gate]), abs(3.0 - 1j))


def test_zero_amplitude_and_no_overlap(victim):
    agg = SweepConfig(76.7e9, 12e12, 40e-6, 40e6, 10e6, 0)
    assert not synth_interference(InterferenceSpec(agg, 15e-6, 0.0), victim).samples.any()
    assert not synth_interference(InterferenceSpec(agg, 1.0, 1.0), victim).samples.any()


def test_interference_phase_is_chirp_difference(victim):
    agg = SweepConfig(76.7e9 + 1e6, 12e12, 40e-6, 40e6, 10e6, 0)
    spec = InterferenceSpec(agg, 15e-6, 1.0)
    s = synth_interference(spec, victim).samples
    gate = interference_gate(spec, victim)
    t = victim.times()[gate]
    # instantaneous frequency from phase increments, compared with the analytic f_inst
    dphi = np.angle(s[gate][1:] * np.conj(s[gate][:-1]))
    f_num = dphi * victim.fs / (2 * np.pi)
    tm = t[:-1] + 0.5 / victim.fs
    f_inst = (agg.f0 - victim.f0) + agg.K * (tm - spec.t_start) - victim.K * tm
    np.testing.assert_allclose(f_num, f_inst, atol=1.0)


def test_noise_inf_snr_is_copy(victim):
    x = synth_beat([Target(30.0)], victim)
    y = add_noise(x, x, math.inf, 0)
    assert np.array_equal(x.samples, y.samples)


def test_noise_zero_reference(victim):
    z = ComplexSignal(np.zeros(victim.n_samples), victim.fs)
    with pytest.raises(ZeroPowerReference):
        add_noise(z, z, 5.0, 0)


def test_noise_deterministic_and_additive(victim):
    x = synth_beat([Target(30.0)], victim)
    other = ComplexSignal(np.ones(len(x)), x.fs)
    a = add_noise(x, x, 5.0, 3).samples - x.samples
    b = add_noise(other, x, 5.0, 3).samples - other.samples
    np.testing.assert_allclose(a, b, atol=1e-12)
    assert np.array_equal(add_noise(x, x, 5.0, 3).samples, add_noise(x, x, 5.0, 3).samples)


def test_noise_calibrated_over_seeds(victim):
    tg = [Target(30.0, 1.0), Target(80.0, 0.1), Target(150.0, 0.7)]
    x = synth_beat(tg, victim)
    p_noise = np.mean([np.mean(np.abs(add_noise(x, x, 5.0, s).samples - x.samples) ** 2) for s in range(10_000)])
    snr = 10 * np.log10(x.power / p_noise)
    assert abs(snr - 5.0) < 0.1


def test_scene_finite(table1):
    sc = synth_scene(table1.targets, table1.interferers, table1.victim, 5.0, 1)
    for s in (sc.clean, sc.interference, sc.observed):
        assert np.isfinite(s.samples).all()
    assert len(sc.gates) == len(table1.interferers)
