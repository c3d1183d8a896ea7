"""Interference suppression on a masked t-f spectrum and the single-pass pipeline.

The pipeline is: STFT -> power -> CA-CFAR along every frequency bin ->
dilation -> zeroing (``cfar_z``) or amplitude correction (``cfar_ac``) ->
inverse STFT. Detection runs once; there is no re-detection after suppression.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .cfar import CfarParams, DetectionMask, detect_map
from .errors import CfarImError, PipelineError, ShapeMismatch
from .morphology import StructuringElement, dilate, make_se
from .signal_model import ComplexSignal
from .tf_analysis import Spectrogram, StftConfig, TfSpectrum, istft, spectrogram, stft


class MitigationMethod(str, enum.Enum):
    CFAR_Z = "cfar_z"
    CFAR_AC = "cfar_ac"


@dataclass(frozen=True)
class PipelineConfig:
    stft: StftConfig = field(default_factory=StftConfig)
    cfar: CfarParams = field(default_factory=CfarParams)
    se: StructuringElement = field(default_factory=lambda: make_se("octagon", 3))
    method: MitigationMethod = MitigationMethod.CFAR_AC

    def __post_init__(self):
        object.__setattr__(self, "method", MitigationMethod(self.method))

    def with_method(self, method) -> "PipelineConfig":
        return PipelineConfig(self.stft, self.cfar, self.se, MitigationMethod(method))


def _check_shapes(spec: TfSpectrum, mask: DetectionMask):
    if spec.values.shape != mask.bits.shape:
        raise ShapeMismatch(f"spectrum shape {spec.values.shape} != mask shape {mask.bits.shape}")


def apply_cfar_z(spec: TfSpectrum, mask: DetectionMask) -> TfSpectrum:
    _check_shapes(spec, mask)
    out = spec.values.copy()
    out[mask.bits] = 0
    return spec.with_values(out)


def bin_mean_amplitude(spec: TfSpectrum, mask: DetectionMask) -> np.ndarray:
    """Mean magnitude of the unmasked cells of every frequency bin (0 for a fully masked bin)."""
    _check_shapes(spec, mask)
    free = ~mask.bits
    mag = np.abs(spec.values)
    n_free = free.sum(axis=1)
    total = np.where(free, mag, 0.0).sum(axis=1)
    return np.divide(total, n_free, out=np.zeros_like(total), where=n_free > 0)


def apply_cfar_ac(spec: TfSpectrum, mask: DetectionMask) -> TfSpectrum:
    """Give every masked cell its bin's interference-free mean magnitude, keeping its phase."""
    amp = bin_mean_amplitude(spec, mask)
    out = spec.values.copy()
    rows, cols = np.nonzero(mask.bits)
    out[rows, cols] = amp[rows] * np.exp(1j * np.angle(out[rows, cols]))
    return spec.with_values(out)


SUPPRESSORS = {
    MitigationMethod.CFAR_Z: apply_cfar_z,
    MitigationMethod.CFAR_AC: apply_cfar_ac,
}


@dataclass(frozen=True, eq=False)
class MitigationResult:
    recovered: ComplexSignal
    raw_mask: DetectionMask
    dilated_mask: DetectionMask
    spectrum: TfSpectrum
    power: Spectrogram
    suppressed: TfSpectrum


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except CfarImError as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline(sig: ComplexSignal, cfg: PipelineConfig) -> MitigationResult:
    spec = _stage("stft", stft, sig, cfg.stft)
    power = spectrogram(spec)
    raw = _stage("cfar", detect_map, power, cfg.cfar)
    dl = _stage("dilate", dilate, raw, cfg.se)
    suppressed = _stage(cfg.method.value, SUPPRESSORS[cfg.method], spec, dl)
    recovered = _stage("istft", istft, suppressed)
    return MitigationResult(
        ComplexSignal(recovered.samples, sig.fs, sig.t0), raw, dl, spec, power, suppressed
    )


def mitigate_sweep(sig: ComplexSignal, cfg: PipelineConfig) -> tuple[ComplexSignal, DetectionMask, DetectionMask]:
    """Recovered signal plus the raw and dilated detection masks for one sweep."""
    res = run_pipeline(sig, cfg)
    return res.recovered, res.raw_mask, res.dilated_mask


def mitigate_both(sig: ComplexSignal, cfg: PipelineConfig) -> dict[MitigationMethod, MitigationResult]:
    """Run detection once and both suppressors on the same masks."""
    spec = _stage("stft", stft, sig, cfg.stft)
    power = spectrogram(spec)
    raw = _stage("cfar", detect_map, power, cfg.cfar)
    dl = _stage("dilate", dilate, raw, cfg.se)
    out = {}
    for method, fn in SUPPRESSORS.items():
        suppressed = _stage(method.value, fn, spec, dl)
        rec = _stage("istft", istft, suppressed)
        out[method] = MitigationResult(
            ComplexSignal(rec.samples, sig.fs, sig.t0), raw, dl, spec, power, suppressed
        )
    return out
