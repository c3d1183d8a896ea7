"""Short-time Fourier transform, its weighted overlap-add inverse, and the spectrogram.

Matrices are stored frequency-major: row ``n`` is DFT bin ``n`` (DFT order,
``0 .. nfft-1``) and column ``m`` is the window position starting at padded
sample ``m * hop``. Each column is the plain ``nfft``-point DFT of one
windowed frame; the sampling-interval scale factor is not applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import get_window

from .errors import ColaViolation, SignalTooShort
from .signal_model import ComplexSignal

WINDOWS = ("hann", "hamming", "gaussian")
COLA_RTOL = 1e-8


@lru_cache(maxsize=32)
def _window(name: str, length: int) -> np.ndarray:
    if name == "gaussian":
        w = get_window(("gaussian", length / 6), length)
    else:
        w = get_window(name, length)
    w.setflags(write=False)
    return w


@dataclass(frozen=True)
class StftConfig:
    window: str = "hann"
    length: int = 256
    hop: int = 4
    nfft: int | None = None
    pad: int | None = None

    def __post_init__(self):
        if self.window not in WINDOWS:
            raise ValueError(f"window must be one of {WINDOWS}, got {self.window!r}")
        if self.length < 1:
            raise ValueError("window length must be >= 1")
        if not 1 <= self.hop <= self.length:
            raise ValueError(f"hop must lie in [1, {self.length}], got {self.hop}")
        if self.nfft is None:
            object.__setattr__(self, "nfft", self.length)
        if self.nfft < self.length:
            raise ValueError(f"nfft ({self.nfft}) must be >= window length ({self.length})")
        if self.pad is None:
            object.__setattr__(self, "pad", self.length // 2)
        if self.pad < 0:
            raise ValueError("pad must be >= 0")

    @property
    def taper(self) -> np.ndarray:
        return _window(self.window, self.length)

    def n_frames(self, n_samples: int) -> int:
        n_padded = n_samples + 2 * self.pad
        if n_padded < self.length:
            raise SignalTooShort(
                f"{n_samples} samples + 2*{self.pad} padding is shorter than the window ({self.length})"
            )
        return (n_padded - self.length) // self.hop + 1


def cola_envelope(cfg: StftConfig) -> np.ndarray:
    """Steady-state ``sum_m w^2[k - m*hop]`` for ``k = 0 .. hop-1``."""
    w2 = cfg.taper**2
    n_rows = -(-cfg.length // cfg.hop)
    padded = np.zeros(n_rows * cfg.hop)
    padded[: cfg.length] = w2
    return padded.reshape(n_rows, cfg.hop).sum(axis=0)


def check_cola(cfg: StftConfig) -> bool:
    env = cola_envelope(cfg)
    return bool(env.min() > 0 and np.ptp(env) <= COLA_RTOL * env.max())


@dataclass(frozen=True, eq=False)
class TfSpectrum:
    values: np.ndarray
    config: StftConfig
    fs: float
    n_samples: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def with_values(self, values: np.ndarray) -> "TfSpectrum":
        return TfSpectrum(values, self.config, self.fs, self.n_samples)

    def frequencies(self) -> np.ndarray:
        """Bin frequencies in DFT order, mapped to ``[-fs/2, fs/2)``."""
        return np.fft.fftfreq(self.config.nfft, 1 / self.fs)

    def times(self) -> np.ndarray:
        """Window-centre time of every column, on the unpadded signal clock."""
        cfg = self.config
        m = np.arange(self.values.shape[1])
        return (m * cfg.hop - cfg.pad + cfg.length / 2) / self.fs


@dataclass(frozen=True, eq=False)
class Spectrogram:
    power: np.ndarray
    fs: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.power.shape


def stft(sig: ComplexSignal, cfg: StftConfig) -> TfSpectrum:
    x = sig.samples
    n_frames = cfg.n_frames(x.size)
    padded = np.zeros(x.size + 2 * cfg.pad, dtype=np.complex128)
    padded[cfg.pad : cfg.pad + x.size] = x
    frames = sliding_window_view(padded, cfg.length)[:: cfg.hop][:n_frames] * cfg.taper
    values = np.fft.fft(frames, n=cfg.nfft, axis=1).T
    return TfSpectrum(np.ascontiguousarray(values), cfg, sig.fs, x.size)


def _overlap_add(frames: np.ndarray, hop: int, total: int) -> np.ndarray:
    n_frames, length = frames.shape
    buf = np.zeros(max(total, n_frames * hop + length), dtype=frames.dtype)
    for j in range(-(-length // hop)):
        width = min(hop, length - j * hop)
        view = buf[j * hop : j * hop + n_frames * hop].reshape(n_frames, hop)
        view[:, :width] += frames[:, j * hop : j * hop + width]
    return buf[:total]


def istft(spec: TfSpectrum) -> ComplexSignal:
    """Weighted overlap-add inverse with ``w^2`` normalisation; strips the padding."""
    cfg = spec.config
    if not check_cola(cfg):
        raise ColaViolation(
            f"{cfg.window} window of length {cfg.length} with hop {cfg.hop} "
            "does not give a constant squared-window overlap"
        )
    n_frames = spec.values.shape[1]
    w = cfg.taper
    frames = np.fft.ifft(spec.values.T, axis=1)[:, : cfg.length] * w
    total = spec.n_samples + 2 * cfg.pad
    num = _overlap_add(frames, cfg.hop, total)
    env = _overlap_add(np.broadcast_to(w**2, (n_frames, cfg.length)), cfg.hop, total)
    sl = slice(cfg.pad, cfg.pad + spec.n_samples)
    env = env[sl]
    if spec.n_samples and env.min() <= 1e-12 * cola_envelope(cfg).max():
        raise ColaViolation("window envelope vanishes at the signal edges; increase pad")
    return ComplexSignal(num[sl] / env, spec.fs)


def spectrogram(spec: TfSpectrum) -> Spectrogram:
    v = spec.values
    return Spectrogram(v.real**2 + v.imag**2, spec.fs)
