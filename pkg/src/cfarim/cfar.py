"""One-dimensional cell-averaging CFAR, applied along each frequency bin."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import RowTooShort
from .tf_analysis import Spectrogram


def threshold_factor(pfa: float, n_total_train: int) -> float:
    """CA-CFAR scale ``N (pfa^(-1/N) - 1)`` for exponentially distributed cell power."""
    if not 0 < pfa < 1:
        raise ValueError(f"pfa must lie in (0, 1), got {pfa}")
    if n_total_train < 1:
        raise ValueError("need at least one training cell")
    n = n_total_train
    return n * np.expm1(-np.log(pfa) / n)


@dataclass(frozen=True)
class CfarParams:
    n_guard: int = 2
    n_train: int = 16
    pfa: float = 1e-3
    threshold_factor_override: float | None = None

    def __post_init__(self):
        if self.n_train < 1:
            raise ValueError("n_train must be >= 1")
        if self.n_guard < 0:
            raise ValueError("n_guard must be >= 0")
        if not 0 < self.pfa < 1:
            raise ValueError(f"pfa must lie in (0, 1), got {self.pfa}")
        if self.threshold_factor_override is not None and not self.threshold_factor_override > 0:
            raise ValueError("threshold_factor_override must be positive")

    @property
    def alpha(self) -> float:
        if self.threshold_factor_override is not None:
            return float(self.threshold_factor_override)
        return float(threshold_factor(self.pfa, 2 * self.n_train))

    @property
    def half_width(self) -> int:
        return self.n_guard + self.n_train


@dataclass(frozen=True, eq=False)
class DetectionMask:
    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", np.asarray(self.bits, dtype=bool))

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    @property
    def count(self) -> int:
        return int(self.bits.sum())


def noise_level(power: np.ndarray, params: CfarParams) -> np.ndarray:
    """Mean of the available training cells around every cell, along the last axis.

    Training windows are clipped at the row ends and the mean is renormalised
    over the cells that remain.
    """
    g, t = params.n_guard, params.n_train
    n = power.shape[-1]
    if n <= 2 * (g + t):
        raise RowTooShort(f"row length {n} must exceed 2*(n_guard + n_train) = {2 * (g + t)}")
    edge = g + t
    pad = [(0, 0)] * (power.ndim - 1) + [(edge, edge)]
    padded = np.pad(np.asarray(power, dtype=np.float64), pad)
    sums = sliding_window_view(padded, t, axis=-1).sum(axis=-1)
    total = sums[..., :n] + sums[..., 2 * g + t + 1 : 2 * g + t + 1 + n]

    idx = np.arange(n)
    count = np.clip(idx - g, 0, t) + np.clip(n - 1 - idx - g, 0, t)
    return total / count


def cfar_threshold(power: np.ndarray, params: CfarParams) -> np.ndarray:
    return params.alpha * noise_level(power, params)


def detect_row(power_row: np.ndarray, params: CfarParams) -> np.ndarray:
    row = np.asarray(power_row, dtype=np.float64)
    if row.ndim != 1:
        raise ValueError("detect_row expects a one-dimensional power sequence")
    return row > cfar_threshold(row, params)


def detect_map(spec: Spectrogram, params: CfarParams) -> DetectionMask:
    """Row-wise CA-CFAR over a spectrogram; every frequency bin is tested independently."""
    power = spec.power
    try:
        bits = power > cfar_threshold(power, params)
    except RowTooShort as exc:
        raise RowTooShort(f"row 0: {exc}", row=0) from exc
    return DetectionMask(bits)
