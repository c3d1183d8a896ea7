"""Randomized invariants, 1000 cases each."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cfarim.cfar import CfarParams, DetectionMask, detect_row
from cfarim.metrics import corr_coeff, sinr
from cfarim.mitigation import apply_cfar_ac, apply_cfar_z, bin_mean_amplitude
from cfarim.morphology import SHAPES, dilate, make_se
from cfarim.signal_model import ComplexSignal, SweepConfig, Target, add_noise, synth_beat
from cfarim.tf_analysis import StftConfig, TfSpectrum

N_CASES = 1000
PROP = settings(max_examples=N_CASES, deadline=None, suppress_health_check=[HealthCheck.too_slow])

seeds = st.integers(0, 2**32 - 1)


def _complex_matrix(seed, shape):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@PROP
@given(
    seed=seeds,
    g=st.integers(0, 4),
    t=st.integers(1, 12),
    extra=st.integers(1, 80),
    scale=st.floats(1e-6, 1e6),
)
def test_cfar_scale_invariance(seed, g, t, extra, scale):
    rng = np.random.default_rng(seed)
    row = rng.exponential(size=2 * (g + t) + extra)
    p = CfarParams(g, t, 1e-2)
    assert np.array_equal(detect_row(scale * row, p), detect_row(row, p))


@PROP
@given(seed=seeds, rows=st.integers(1, 12), cols=st.integers(1, 40), density=st.floats(0, 1))
def test_cfar_z_idempotent(seed, rows, cols, density):
    v = _complex_matrix(seed, (rows, cols))
    mask = DetectionMask(np.random.default_rng(seed + 1).random((rows, cols)) < density)
    spec = TfSpectrum(v, StftConfig("hann", 8, 2), 1.0, 10)
    once = apply_cfar_z(spec, mask)
    assert np.array_equal(apply_cfar_z(once, mask).values, once.values)


@PROP
@given(seed=seeds, rows=st.integers(1, 12), cols=st.integers(1, 40), density=st.floats(0, 1))
def test_cfar_ac_phase_and_magnitude(seed, rows, cols, density):
    v = _complex_matrix(seed, (rows, cols))
    bits = np.random.default_rng(seed + 1).random((rows, cols)) < density
    mask = DetectionMask(bits)
    spec = TfSpectrum(v, StftConfig("hann", 8, 2), 1.0, 10)
    out = apply_cfar_ac(spec, mask).values
    amp = bin_mean_amplitude(spec, mask)
    r, c = np.nonzero(bits)
    # magnitude flattened to the bin's unmasked mean
    np.testing.assert_allclose(np.abs(out[r, c]), amp[r], rtol=1e-14, atol=0)
    keep = amp[r] > 0
    dphi = np.angle(out[r, c][keep] * np.conj(v[r, c][keep]))
    assert np.all(np.abs(dphi) < 1e-12)
    assert np.array_equal(out[~bits], v[~bits])


masks = arrays(np.bool_, st.tuples(st.integers(1, 24), st.integers(1, 24)))


@PROP
@given(m=masks, shape=st.sampled_from(SHAPES), r=st.integers(0, 4))
def test_dilation_extensive(m, shape, r):
    out = dilate(DetectionMask(m), make_se(shape, r)).bits
    assert np.all(out[m])


@PROP
@given(m=masks, seed=seeds, shape=st.sampled_from(SHAPES), r=st.integers(0, 4))
def test_dilation_monotone(m, seed, shape, r):
    bigger = m | (np.random.default_rng(seed).random(m.shape) < 0.2)
    se = make_se(shape, r)
    small_out = dilate(DetectionMask(m), se).bits
    big_out = dilate(DetectionMask(bigger), se).bits
    assert not np.any(small_out & ~big_out)


@PROP
@given(seed=seeds, n=st.integers(1, 300), mix=st.floats(0, 1))
def test_rho_bounded(seed, n, mix):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = mix * a + (1 - mix) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    if not np.any(b):
        b = a
    assert abs(corr_coeff(ComplexSignal(b, 1.0), ComplexSignal(a, 1.0))) <= 1 + 1e-12


@PROP
@given(seed=seeds, n=st.integers(2, 300), phi=st.floats(-np.pi, np.pi), psi=st.floats(-np.pi, np.pi),
       ka=st.floats(1e-3, 1e3), kb=st.floats(1e-3, 1e3))
def test_metric_invariances(seed, n, phi, psi, ka, kb):
    rng = np.random.default_rng(seed)
    ref = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    rec = ref + 0.3 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    rot = np.exp(1j * phi)
    s0 = sinr(ComplexSignal(rec, 1.0), ComplexSignal(ref, 1.0))
    s1 = sinr(ComplexSignal(rot * rec, 1.0), ComplexSignal(rot * ref, 1.0))
    assert abs(s0 - s1) < 1e-9
    r0 = abs(corr_coeff(ComplexSignal(rec, 1.0), ComplexSignal(ref, 1.0)))
    r1 = abs(corr_coeff(ComplexSignal(ka * rot * rec, 1.0), ComplexSignal(kb * np.exp(1j * psi) * ref, 1.0)))
    assert abs(r0 - r1) < 1e-12


_CFG = SweepConfig(76.7e9, 6e12, 100e-6, 40e6, 10e6, 512)


@PROP
@given(seed=seeds, snr=st.floats(-30, 40), r=st.floats(0, 240))
def test_noise_deterministic(seed, snr, r):
    clean = synth_beat([Target(r)], _CFG)
    a = add_noise(clean, clean, snr, seed)
    b = add_noise(clean, clean, snr, seed)
    assert np.array_equal(a.samples, b.samples)


_PIPE = None


def _small_pipeline():
    global _PIPE
    if _PIPE is None:
        from cfarim.mitigation import PipelineConfig

        _PIPE = PipelineConfig(StftConfig("hann", 64, 4), CfarParams(10, 8, 1e-3), make_se("octagon", 2))
    return _PIPE


@PROP
@given(seed=seeds, snr=st.floats(-10, 30), ts=st.floats(0, 10e-6), amp=st.floats(0, 50))
def test_pipeline_deterministic(seed, snr, ts, amp):
    from cfarim.mitigation import mitigate_both
    from cfarim.signal_model import InterferenceSpec, synth_scene

    agg = SweepConfig(76.7e9, 12e12, 10e-6, 40e6, 10e6, 0)
    runs = []
    for _ in range(2):
        sc = synth_scene([Target(30.0), Target(150.0, 0.5)], [InterferenceSpec(agg, ts, amp)], _CFG, snr, seed)
        runs.append({m: r.recovered.samples for m, r in mitigate_both(sc.observed, _small_pipeline()).items()})
    for m in runs[0]:
        assert np.array_equal(runs[0][m], runs[1][m])
