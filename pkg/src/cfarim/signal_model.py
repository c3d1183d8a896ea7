"""Dechirped FMCW beat signals, interference pulses and receiver noise.

Sign convention: the receiver dechirps by the conjugate of its own chirp, so a
point target at range ``R`` appears as ``a * exp(-j 2 pi f_b t)`` with
``f_b = 2 K R / c``, i.e. at a *negative* baseband frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyConfig, TargetOutOfBand, ZeroPowerReference

C = 299_792_458.0  # speed of light, m/s


@dataclass(frozen=True)
class SweepConfig:
    """One FMCW chirp: start frequency, slope, duration and ADC settings.

    ``K`` may be negative for a down-sweeping aggressor; only a victim radar
    (the one that samples) needs ``K > 0``.
    """

    f0: float
    K: float
    T: float
    fs: float
    f_cut: float
    n_samples: int

    def __post_init__(self):
        if self.K == 0 or not math.isfinite(self.K):
            raise ValueError(f"sweep slope K must be finite and nonzero, got {self.K}")
        if not self.T > 0:
            raise ValueError(f"sweep duration T must be > 0, got {self.T}")
        if not self.fs > 0:
            raise ValueError(f"sampling frequency fs must be > 0, got {self.fs}")
        if not 0 < self.f_cut <= self.fs / 2:
            raise ValueError(f"f_cut must lie in (0, fs/2], got {self.f_cut}")
        n_max = math.floor(self.fs * self.T * (1 + 1e-12))
        if not 0 <= self.n_samples <= n_max:
            raise ValueError(f"n_samples must lie in [0, floor(fs*T)={n_max}], got {self.n_samples}")

    @property
    def bandwidth(self) -> float:
        return abs(self.K) * self.T

    @property
    def max_range(self) -> float:
        """Range whose beat frequency sits exactly at the low-pass cutoff."""
        return self.f_cut * C / (2 * abs(self.K))

    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) / self.fs

    def beat_frequency(self, range_m: float) -> float:
        return 2 * self.K * range_m / C


@dataclass(frozen=True)
class Target:
    range: float
    amplitude: complex = 1.0

    def __post_init__(self):
        if not self.range >= 0:
            raise ValueError(f"target range must be >= 0, got {self.range}")


@dataclass(frozen=True)
class InterferenceSpec:
    """An aggressor chirp that starts at ``t_start`` on the victim's sweep clock."""

    aggressor: SweepConfig
    t_start: float
    amplitude: complex = 1.0


@dataclass(frozen=True, eq=False)
class ComplexSignal:
    samples: np.ndarray
    fs: float
    t0: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("ComplexSignal samples must be one-dimensional")
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    def __add__(self, other: "ComplexSignal") -> "ComplexSignal":
        if len(self) != len(other) or self.fs != other.fs:
            raise ValueError("signals must share length and sampling frequency")
        return ComplexSignal(self.samples + other.samples, self.fs, self.t0)

    @property
    def power(self) -> float:
        """Mean power, 0 for an empty signal."""
        if self.samples.size == 0:
            return 0.0
        return float(np.mean(np.abs(self.samples) ** 2))

    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) / self.fs


def _check_victim(cfg: SweepConfig):
    if cfg.K <= 0:
        raise ValueError("the victim radar must use an up-sweep (K > 0)")


def synth_beat(targets: Iterable[Target], cfg: SweepConfig) -> ComplexSignal:
    """Sum of target tones ``a_i exp(-j 2 pi f_b,i t)`` over one sweep."""
    _check_victim(cfg)
    if cfg.n_samples == 0:
        raise EmptyConfig("sweep has n_samples = 0")
    t = cfg.times()
    out = np.zeros(cfg.n_samples, dtype=np.complex128)
    for tgt in targets:
        fb = cfg.beat_frequency(tgt.range)
        if fb > cfg.f_cut:
            raise TargetOutOfBand(
                f"target at {tgt.range} m has beat frequency {fb:.6g} Hz above f_cut {cfg.f_cut:.6g} Hz"
            )
        out += complex(tgt.amplitude) * np.exp(-2j * np.pi * fb * t)
    return ComplexSignal(out, cfg.fs)


def interference_gate(spec: InterferenceSpec, victim: SweepConfig, t: np.ndarray | None = None) -> np.ndarray:
    """Boolean mask of samples where the dechirped aggressor passes the low-pass filter."""
    if t is None:
        t = victim.times()
    agg = spec.aggressor
    tl = t - spec.t_start
    f_inst = (agg.f0 - victim.f0) + agg.K * tl - victim.K * t
    active = (tl >= 0) & (tl <= agg.T)
    return active & (np.abs(f_inst) <= victim.f_cut)


def synth_interference(spec: InterferenceSpec, victim: SweepConfig) -> ComplexSignal:
    """Aggressor chirp after dechirping and ideal low-pass filtering.

    The filter is an instantaneous-frequency gate: a sample is kept when the
    aggressor is transmitting and the difference frequency lies within
    ``+-f_cut``. Inside the gate the phase is the exact chirp difference.
    """
    _check_victim(victim)
    t = victim.times()
    out = np.zeros(t.size, dtype=np.complex128)
    amp = complex(spec.amplitude)
    gate = interference_gate(spec, victim, t)
    if amp == 0 or not gate.any():
        return ComplexSignal(out, victim.fs)
    agg = spec.aggressor
    tg = t[gate]
    tl = tg - spec.t_start
    # the large f0 * t_start product only matters modulo one cycle
    const = -math.fmod(agg.f0 * spec.t_start, 1.0)
    cycles = (agg.f0 - victim.f0) * tg + 0.5 * agg.K * tl**2 - 0.5 * victim.K * tg**2
    out[gate] = amp * np.exp(2j * np.pi * (cycles + const))
    return ComplexSignal(out, victim.fs)


def add_noise(sig: ComplexSignal, clean_ref: ComplexSignal, snr_db: float, seed: int) -> ComplexSignal:
    """Add circular complex white Gaussian noise at ``snr_db`` relative to ``clean_ref``.

    The noise realization depends only on ``clean_ref``'s mean power, ``snr_db``
    and ``seed``; ``snr_db = inf`` returns an unchanged copy.
    """
    if len(sig) != len(clean_ref):
        raise ValueError("signal and reference must have equal length")
    if math.isinf(snr_db) and snr_db > 0:
        return ComplexSignal(sig.samples.copy(), sig.fs, sig.t0)
    p_ref = clean_ref.power
    if p_ref == 0:
        raise ZeroPowerReference("clean reference has zero power; SNR is undefined")
    return ComplexSignal(sig.samples + noise(len(sig), p_ref / 10 ** (snr_db / 10), seed), sig.fs, sig.t0)


def noise(n: int, power: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    scale = math.sqrt(power / 2)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


@dataclass(frozen=True, eq=False)
class Scene:
    """Synthesized components of one contaminated sweep."""

    clean: ComplexSignal
    interference: ComplexSignal
    observed: ComplexSignal
    gates: list = field(default_factory=list)


def synth_scene(
    targets: Sequence[Target],
    interferers: Sequence[InterferenceSpec],
    cfg: SweepConfig,
    snr_db: float,
    seed: int,
) -> Scene:
    """Clean beat + interference + noise, with noise referenced to the clean beat."""
    clean = synth_beat(targets, cfg)
    interf = ComplexSignal(np.zeros(cfg.n_samples, dtype=np.complex128), cfg.fs)
    gates = []
    for spec in interferers:
        interf = interf + synth_interference(spec, cfg)
        gates.append(interference_gate(spec, cfg))
    observed = add_noise(clean + interf, clean, snr_db, seed)
    return Scene(clean, interf, observed, gates)
