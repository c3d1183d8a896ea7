"""Recovery quality (SINR, correlation coefficient) and range-profile detection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import get_window

from .cfar import CfarParams, detect_row
from .errors import ZeroReference, ZeroSignal
from .signal_model import C, ComplexSignal, SweepConfig

SINR_CAP_DB = 300.0


def _pair(a: ComplexSignal, b: ComplexSignal) -> tuple[np.ndarray, np.ndarray]:
    x, y = np.asarray(a.samples), np.asarray(b.samples)
    if x.shape != y.shape:
        raise ValueError(f"signal lengths differ: {x.size} vs {y.size}")
    return x, y


def sinr(recovered: ComplexSignal, reference: ComplexSignal) -> float:
    """``20 log10(||ref|| / ||recovered - ref||)`` in dB, capped at 300 dB."""
    x, ref = _pair(recovered, reference)
    ref_norm = np.linalg.norm(ref)
    if ref_norm == 0:
        raise ZeroReference("reference signal is all zero")
    err_norm = np.linalg.norm(x - ref)
    if err_norm == 0:
        return SINR_CAP_DB
    return min(SINR_CAP_DB, 20 * math.log10(ref_norm / err_norm))


def corr_coeff(recovered: ComplexSignal, reference: ComplexSignal) -> complex:
    """Normalised inner product ``<recovered, reference> / (||recovered|| ||reference||)``."""
    x, ref = _pair(recovered, reference)
    nx, nr = np.linalg.norm(x), np.linalg.norm(ref)
    if nx == 0 or nr == 0:
        raise ZeroSignal("correlation coefficient needs two nonzero signals")
    # scale first so that |rho| <= 1 holds to rounding
    return complex(np.vdot(ref / nr, x / nx))


@dataclass(frozen=True, eq=False)
class RangeProfile:
    ranges: np.ndarray
    power: np.ndarray

    @property
    def resolution(self) -> float:
        return float(self.ranges[1] - self.ranges[0]) if self.ranges.size > 1 else math.inf

    def db(self, floor_db: float = -300.0) -> np.ndarray:
        with np.errstate(divide="ignore"):
            out = 10 * np.log10(self.power)
        return np.maximum(out, floor_db)


def range_profile(sig: ComplexSignal, cfg: SweepConfig, nfft_rp: int = 4096, window: str = "hann") -> RangeProfile:
    """Windowed DFT power mapped to range on ``[0, R_max]``.

    Targets sit at negative beat frequencies, so range bin ``j`` reads DFT bin
    ``-j mod nfft_rp``.
    """
    x = sig.samples
    if nfft_rp < x.size:
        raise ValueError(f"nfft_rp ({nfft_rp}) must be >= signal length ({x.size})")
    w = get_window(window, x.size) if x.size > 1 else np.ones(x.size)
    spec = np.fft.fft(x * w, n=nfft_rp)
    df = sig.fs / nfft_rp
    n_bins = int(math.floor(cfg.f_cut / df + 1e-9)) + 1
    j = np.arange(n_bins)
    power = np.abs(spec[(-j) % nfft_rp]) ** 2
    ranges = C * j * df / (2 * cfg.K)
    return RangeProfile(ranges, power)


def rp_cfar_detect(rp: RangeProfile, params: CfarParams) -> list[tuple[float, float]]:
    """CA-CFAR on a range profile; runs of consecutive hits collapse to their peak cell."""
    hits = detect_row(rp.power, params)
    out = []
    idx = np.flatnonzero(hits)
    if idx.size == 0:
        return out
    breaks = np.flatnonzero(np.diff(idx) > 1) + 1
    for run in np.split(idx, breaks):
        k = run[np.argmax(rp.power[run])]
        out.append((float(rp.ranges[k]), float(rp.power[k])))
    return out


@dataclass(frozen=True, eq=False)
class IMReport:
    sinr_db: float
    rho: complex
    rp: RangeProfile
    detections: list = field(default_factory=list)

    @property
    def rho_abs(self) -> float:
        return abs(self.rho)

    @property
    def rho_phase(self) -> float:
        return math.atan2(self.rho.imag, self.rho.real)


def evaluate(
    recovered: ComplexSignal,
    reference: ComplexSignal | None,
    cfg: SweepConfig,
    rp_params: CfarParams,
    nfft_rp: int = 4096,
    window: str = "hann",
) -> IMReport:
    """Metrics bundle; SINR and rho are NaN when no reference is available."""
    rp = range_profile(recovered, cfg, nfft_rp, window)
    dets = rp_cfar_detect(rp, rp_params)
    if reference is None:
        return IMReport(math.nan, complex(math.nan, math.nan), rp, dets)
    return IMReport(sinr(recovered, reference), corr_coeff(recovered, reference), rp, dets)
