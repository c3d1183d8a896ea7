"""Binary IQ captures and CSV artifacts.

IQ layout: little-endian float32 pairs ``I0 Q0 I1 Q1 ...`` in ``name.iq`` and
a sidecar ``name.hdr`` text header (INI) declaring the sampling rate, sample
count and the sweep that produced the capture.
"""

from __future__ import annotations

import configparser
import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, IoError
from .signal_model import ComplexSignal, SweepConfig

IQ_FORMAT = "cf32le"
_DTYPE = np.dtype("<f4")
_SWEEP_KEYS = ("f0", "K", "T", "fs", "f_cut", "n_samples")


@dataclass(frozen=True, eq=False)
class IqCapture:
    signal: ComplexSignal
    sweep: SweepConfig | None


def header_path(iq_path: str | Path) -> Path:
    return Path(iq_path).with_suffix(".hdr")


def quantize(sig: ComplexSignal) -> ComplexSignal:
    """Round samples to the precision the IQ file stores."""
    return ComplexSignal(sig.samples.astype(np.complex64).astype(np.complex128), sig.fs, sig.t0)


def write_iq(path: str | Path, sig: ComplexSignal, sweep: SweepConfig | None = None) -> Path:
    path = Path(path)
    inter = np.empty(2 * len(sig), dtype=_DTYPE)
    inter[0::2] = sig.samples.real
    inter[1::2] = sig.samples.imag
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["iq"] = {"format": IQ_FORMAT, "fs": repr(float(sig.fs)), "n_samples": str(len(sig)), "t0": repr(float(sig.t0))}
    if sweep is not None:
        cp["sweep"] = {k: repr(getattr(sweep, k)) for k in _SWEEP_KEYS}
    try:
        path.write_bytes(inter.tobytes())
        with open(header_path(path), "w", encoding="utf-8", newline="\n") as fh:
            cp.write(fh)
    except OSError as exc:
        raise IoError(f"{path}: cannot write IQ capture: {exc.strerror}") from exc
    return path


def _header_field(cp, section, key, conv, hdr):
    try:
        return conv(cp.get(section, key))
    except (configparser.Error, ValueError) as exc:
        raise FormatError(f"{hdr}: bad or missing [{section}] {key}: {exc}") from exc


def read_iq(path: str | Path) -> IqCapture:
    path = Path(path)
    hdr = header_path(path)
    try:
        raw = path.read_bytes()
        text = hdr.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"{exc.filename}: cannot read: {exc.strerror}") from exc
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=str(hdr))
    except configparser.Error as exc:
        raise FormatError(f"{hdr}: malformed header: {exc}") from exc
    fmt = _header_field(cp, "iq", "format", str.strip, hdr)
    if fmt != IQ_FORMAT:
        raise FormatError(f"{hdr}: unsupported sample format {fmt!r}, expected {IQ_FORMAT!r}")
    fs = _header_field(cp, "iq", "fs", float, hdr)
    n = _header_field(cp, "iq", "n_samples", int, hdr)
    t0 = float(cp.get("iq", "t0", fallback="0"))
    if not fs > 0 or n < 0:
        raise FormatError(f"{hdr}: fs must be > 0 and n_samples >= 0")
    expected = n * 2 * _DTYPE.itemsize
    if len(raw) != expected:
        raise FormatError(
            f"{path}: expected {expected} bytes ({n} complex float32 samples), found {len(raw)} bytes"
        )
    data = np.frombuffer(raw, dtype=_DTYPE).astype(np.float64)
    samples = data[0::2] + 1j * data[1::2]
    if not np.isfinite(samples).all():
        raise FormatError(f"{path}: capture contains non-finite samples")
    sweep = None
    if cp.has_section("sweep"):
        vals = {k: _header_field(cp, "sweep", k, int if k == "n_samples" else float, hdr) for k in _SWEEP_KEYS}
        try:
            sweep = SweepConfig(**vals)
        except ValueError as exc:
            raise FormatError(f"{hdr}: invalid sweep: {exc}") from exc
    return IqCapture(ComplexSignal(samples, fs, t0), sweep)


def check_capture(cap: IqCapture, victim: SweepConfig, path: str | Path) -> None:
    """The capture must match the configured sweep's rate and length."""
    sig = cap.signal
    if not math.isclose(sig.fs, victim.fs, rel_tol=1e-9):
        raise FormatError(f"{path}: capture fs {sig.fs:g} Hz differs from the configured {victim.fs:g} Hz")
    if len(sig) != victim.n_samples:
        raise FormatError(f"{path}: capture holds {len(sig)} samples, the configuration expects {victim.n_samples}")


def fmt(x) -> str:
    """Shortest round-trip decimal, empty for NaN."""
    if isinstance(x, (str, int, np.integer)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return ""
    return repr(x)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\r\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise IoError(f"{path}: cannot write: {exc.strerror}") from exc
    return path


def write_matrix(path: str | Path, corner: str, row_labels, col_labels, values: np.ndarray) -> Path:
    """Matrix CSV: a header row of column labels, then one labelled row per matrix row."""
    col_text = [fmt(c) for c in col_labels]
    rows = ([r, *vals] for r, vals in zip(row_labels, values.tolist()))
    return write_csv(path, [corner, *col_text], rows)


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]
