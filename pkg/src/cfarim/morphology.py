"""Binary dilation of detection masks with small symmetric structuring elements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cfar import DetectionMask

SHAPES = ("disk", "octagon", "rect")


@dataclass(frozen=True, eq=False)
class StructuringElement:
    """Offsets ``(di, dj)`` relative to the origin cell at ``(radius, radius)``."""

    shape: str
    radius: int
    footprint: np.ndarray

    @property
    def offsets(self) -> np.ndarray:
        ii, jj = np.nonzero(self.footprint)
        return np.stack([ii - self.radius, jj - self.radius], axis=1)


def make_se(shape: str = "octagon", radius: int = 3) -> StructuringElement:
    if shape not in SHAPES:
        raise ValueError(f"shape must be one of {SHAPES}, got {shape!r}")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    r = int(radius)
    di, dj = np.mgrid[-r : r + 1, -r : r + 1]
    if shape == "disk":
        fp = di**2 + dj**2 <= r * r
    elif shape == "octagon":
        fp = (np.abs(di) + np.abs(dj) <= (3 * r) // 2) & (np.maximum(np.abs(di), np.abs(dj)) <= r)
    else:
        fp = np.ones_like(di, dtype=bool)
    return StructuringElement(shape, r, fp)


def dilate(mask: DetectionMask, se: StructuringElement) -> DetectionMask:
    """Union of copies of ``mask`` shifted by every SE offset; nothing wraps around the edges."""
    src = mask.bits
    n_i, n_j = src.shape
    out = np.zeros_like(src)
    # z is set when z - b hits the mask for some offset b in the element
    for di, dj in se.offsets:
        if abs(di) >= n_i or abs(dj) >= n_j:
            continue
        out[max(di, 0) : n_i + min(di, 0), max(dj, 0) : n_j + min(dj, 0)] |= src[
            max(-di, 0) : n_i + min(-di, 0), max(-dj, 0) : n_j + min(-dj, 0)
        ]
    return DetectionMask(out)
