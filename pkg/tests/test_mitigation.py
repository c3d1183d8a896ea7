import math

import numpy as np
import pytest

from cfarim.cfar import CfarParams, DetectionMask
from cfarim.errors import PipelineError, ShapeMismatch
from cfarim.mitigation import (
    MitigationMethod,
    PipelineConfig,
    apply_cfar_ac,
    apply_cfar_z,
    bin_mean_amplitude,
    mitigate_both,
    mitigate_sweep,
)
from cfarim.signal_model import ComplexSignal
from cfarim.tf_analysis import StftConfig, TfSpectrum, stft


def _spec(rng, shape=(16, 60)):
    v = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return TfSpectrum(v, StftConfig("hann", 16, 4), 1.0, 200)


def test_z_basic(rng):
    s = _spec(rng)
    assert np.array_equal(apply_cfar_z(s, DetectionMask(np.zeros(s.shape, bool))).values, s.values)
    assert not apply_cfar_z(s, DetectionMask(np.ones(s.shape, bool))).values.any()
    m = rng.random(s.shape) < 0.3
    out = apply_cfar_z(s, DetectionMask(m)).values
    removed = np.sum(np.abs(s.values) ** 2) - np.sum(np.abs(out) ** 2)
    assert removed == pytest.approx(np.sum(np.abs(s.values[m]) ** 2))
    assert np.array_equal(out[~m], s.values[~m])


def test_shape_mismatch(rng):
    s = _spec(rng)
    with pytest.raises(ShapeMismatch):
        apply_cfar_z(s, DetectionMask(np.zeros((3, 3), bool)))
    with pytest.raises(ShapeMismatch):
        apply_cfar_ac(s, DetectionMask(np.zeros((3, 3), bool)))


def test_ac_constant_bin():
    v = np.full((2, 10), 3.0 + 0j)
    v[0, 4] = 50 * np.exp(1j * 0.7)
    v[1] = 2 * np.exp(1j * np.arange(10))
    v[1, 2] = 40j
    m = np.zeros((2, 10), bool)
    m[0, 4] = m[1, 2] = True
    s = TfSpectrum(v, StftConfig("hann", 16, 4), 1.0, 100)
    out = apply_cfar_ac(s, DetectionMask(m)).values
    assert out[0, 4] == pytest.approx(3 * np.exp(1j * 0.7))
    assert out[1, 2] == pytest.approx(2j)
    assert np.array_equal(out[~m], v[~m])


def test_ac_fully_masked_bin_is_zeroed(rng):
    s = _spec(rng)
    m = np.zeros(s.shape, bool)
    m[5] = True
    assert bin_mean_amplitude(s, DetectionMask(m))[5] == 0
    assert not apply_cfar_ac(s, DetectionMask(m)).values[5].any()


def test_ac_empty_mask(rng):
    s = _spec(rng)
    assert np.array_equal(apply_cfar_ac(s, DetectionMask(np.zeros(s.shape, bool))).values, s.values)


def test_identity_pipeline(rng):
    x = rng.standard_normal(2000) + 1j * rng.standard_normal(2000)
    sig = ComplexSignal(x, 1.0)
    # an unreachable threshold leaves the mask empty
    cfg = PipelineConfig(StftConfig("hann", 256, 4), CfarParams(2, 16, 1e-3, threshold_factor_override=1e9))
    for method in MitigationMethod:
        rec, d, d_dl = mitigate_sweep(sig, cfg.with_method(method))
        assert d.count == 0 and d_dl.count == 0
        assert np.max(np.abs(rec.samples - x)) < 1e-10 * np.max(np.abs(x))
        assert len(rec) == len(sig)


def test_masks_returned(table1_run):
    for res in table1_run.results.values():
        assert res.raw_mask.count > 0
        assert (res.dilated_mask.bits >= res.raw_mask.bits).all()
        assert res.dilated_mask.count > res.raw_mask.count


def test_both_shares_detection(table1):
    from cfarim.runner import synthesize

    sig = synthesize(table1).observed
    both = mitigate_both(sig, table1.pipeline)
    z = mitigate_sweep(sig, table1.pipeline.with_method("cfar_z"))[0]
    a = mitigate_sweep(sig, table1.pipeline.with_method("cfar_ac"))[0]
    assert np.array_equal(both[MitigationMethod.CFAR_Z].recovered.samples, z.samples)
    assert np.array_equal(both[MitigationMethod.CFAR_AC].recovered.samples, a.samples)


def test_z_energy_does_not_grow(table1_run):
    obs = table1_run.observed
    rec = table1_run.results[MitigationMethod.CFAR_Z].recovered
    assert np.sum(np.abs(rec.samples) ** 2) <= np.sum(np.abs(obs.samples) ** 2) * (1 + 1e-10)


def test_stage_labels():
    sig = ComplexSignal(np.ones(300), 1.0)
    with pytest.raises(PipelineError) as info:
        mitigate_sweep(sig, PipelineConfig(StftConfig("hann", 256, 4), CfarParams(100, 16)))
    assert info.value.stage == "cfar"
    with pytest.raises(PipelineError) as info:
        mitigate_sweep(ComplexSignal(np.ones(10), 1.0), PipelineConfig(StftConfig("hann", 256, 4, pad=0)))
    assert info.value.stage == "stft"
    assert str(info.value).startswith("stft:")


def test_table1_sinr(table1_run):
    after = table1_run.after
    assert 4.5 <= after[MitigationMethod.CFAR_AC].sinr_db <= 8.5
    assert 2 <= after[MitigationMethod.CFAR_Z].sinr_db <= 6
    assert after[MitigationMethod.CFAR_AC].sinr_db > after[MitigationMethod.CFAR_Z].sinr_db
    assert not math.isnan(table1_run.before.sinr_db)
