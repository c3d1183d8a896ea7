"""Scenario files: INI-style key/value text with dotted sections.

A scenario looks like::

    [victim]
    f0 = 76.7e9
    K = 6e12
    ...
    [target.1]
    range = 30
    amplitude = 1
    [interferer.1]
    K = 12e12
    t_start = 15e-6
    amplitude = 46.7
    phase_deg = 315

Every validation error carries the file path and the line of the offending
key (or section header when a key is missing).
"""

from __future__ import annotations

import cmath
import configparser
import math
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .cfar import CfarParams
from .errors import ConfigError
from .mitigation import MitigationMethod, PipelineConfig
from .morphology import make_se
from .signal_model import InterferenceSpec, SweepConfig, Target
from .tf_analysis import StftConfig

PRESETS = ("table1.scenario", "exp_v.scenario", "fig6_desk.scenario")

_SWEEP_TAGS = (
    ("K", "sweep slope"),
    ("T", "sweep duration"),
    ("fs", "sampling frequency"),
    ("f_cut", "f_cut"),
    ("n_samples", "n_samples"),
)
_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^#;=:\s][^=:]*?)\s*[=:]")


@dataclass(frozen=True)
class RangeProfileSettings:
    nfft: int = 4096
    window: str = "hann"
    cfar: CfarParams = field(default_factory=lambda: CfarParams(1, 10, 1e-4))


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    victim: SweepConfig
    targets: tuple[Target, ...]
    interferers: tuple[InterferenceSpec, ...]
    snr_db: float
    seed: int
    pipeline: PipelineConfig
    rp: RangeProfileSettings
    outputs: Path
    methods: tuple[MitigationMethod, ...] = (MitigationMethod.CFAR_Z, MitigationMethod.CFAR_AC)
    source: str | None = None

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=int(seed))

    def with_snr(self, snr_db: float) -> "ScenarioConfig":
        return replace(self, snr_db=float(snr_db))


@dataclass(frozen=True, eq=False)
class MonteCarloSpec:
    snr_grid: tuple[float, ...]
    runs_per_level: int
    base_scenario: ScenarioConfig
    percentiles: tuple[float, ...] = (25.0, 75.0)
    seed_base: int = 0


def preset_path(name: str) -> Path:
    return Path(str(resources.files("cfarim") / "scenarios" / name))


def resolve(path: str | Path) -> Path:
    """A filesystem path, falling back to a shipped preset of the same name."""
    p = Path(path)
    if p.exists():
        return p
    if p.name in PRESETS and not p.parent.parts:
        return preset_path(p.name)
    return p


class _Source:
    """Parsed file plus a (section, key) -> line index for error messages."""

    def __init__(self, text: str, path: str):
        self.path = path
        self.cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
        self.cp.optionxform = str
        try:
            self.cp.read_string(text, source=path)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            if line is None and getattr(exc, "errors", None):
                line = exc.errors[0][0]
            raise ConfigError(str(exc).splitlines()[0], path, line) from exc
        self.lines: dict[tuple[str, str | None], int] = {}
        section = None
        for no, raw in enumerate(text.splitlines(), start=1):
            m = _SECTION_RE.match(raw)
            if m:
                section = m.group(1).strip()
                self.lines.setdefault((section, None), no)
                continue
            m = _KEY_RE.match(raw)
            if m and section is not None:
                self.lines.setdefault((section, m.group(1).strip()), no)

    def error(self, msg: str, section: str, key: str | None = None) -> ConfigError:
        line = self.lines.get((section, key)) or self.lines.get((section, None))
        return ConfigError(msg, self.path, line)

    def sections(self, prefix: str) -> list[str]:
        names = [s for s in self.cp.sections() if s == prefix or s.startswith(prefix + ".")]
        return sorted(names, key=lambda s: (len(s), s))

    def has(self, section: str, key: str | None = None) -> bool:
        if not self.cp.has_section(section):
            return False
        return key is None or self.cp.has_option(section, key)

    def raw(self, section: str, key: str):
        if not self.cp.has_section(section):
            raise ConfigError(f"missing section [{section}]", self.path)
        if not self.cp.has_option(section, key):
            raise self.error(f"[{section}] is missing required key '{key}'", section)
        return self.cp.get(section, key)

    def get(self, section, key, conv, default=...):
        if default is not ... and not self.has(section, key):
            return default
        text = self.raw(section, key)
        try:
            return conv(text)
        except (ValueError, TypeError) as exc:
            raise self.error(f"[{section}] {key} = {text!r}: {exc}", section, key) from exc

    def build(self, section, key, factory, *args, **kwargs):
        """Call a constructor, re-raising its ValueError at the given key's line."""
        try:
            return factory(*args, **kwargs)
        except ValueError as exc:
            raise self.error(f"[{section}]: {exc}", section, key) from exc


def _float(text: str) -> float:
    v = text.strip().lower()
    if v in ("inf", "+inf", "infinity"):
        return math.inf
    out = float(v)
    if math.isnan(out):
        raise ValueError("NaN is not allowed")
    return out


def _int(text: str) -> int:
    f = float(text)
    if not f.is_integer():
        raise ValueError("expected an integer")
    return int(f)


def _complex(text: str) -> complex:
    return complex(text.strip().replace(" ", ""))


def _floats(text: str) -> tuple[float, ...]:
    return tuple(_float(t) for t in re.split(r"[,\s]+", text.strip()) if t)


def _sweep(src: _Source, section: str, defaults: SweepConfig | None = None) -> SweepConfig:
    def pick(key, conv, fallback=...):
        if defaults is not None and fallback is not ...:
            return src.get(section, key, conv, fallback)
        return src.get(section, key, conv)

    kw = dict(
        f0=pick("f0", _float, defaults.f0 if defaults else ...),
        K=pick("K", _float),
        T=pick("T", _float),
        fs=pick("fs", _float, defaults.fs if defaults else ...),
        f_cut=pick("f_cut", _float, defaults.f_cut if defaults else ...),
        n_samples=pick("n_samples", _int, 0 if defaults else ...),
    )
    try:
        return SweepConfig(**kw)
    except ValueError as exc:
        msg = str(exc)
        key = next((k for k, tag in _SWEEP_TAGS if msg.startswith(tag)), None)
        raise src.error(f"[{section}]: {msg}", section, key) from exc


def _stft(src: _Source) -> StftConfig:
    s = "stft"
    return src.build(
        s,
        None,
        StftConfig,
        window=src.get(s, "window", str.strip, "hann"),
        length=src.get(s, "length", _int, 256),
        hop=src.get(s, "hop", _int, 4),
        nfft=src.get(s, "nfft", _int, None),
        pad=src.get(s, "pad", _int, None),
    )


def _cfar(src: _Source, section: str, default: CfarParams) -> CfarParams:
    return src.build(
        section,
        None,
        CfarParams,
        n_guard=src.get(section, "n_guard", _int, default.n_guard),
        n_train=src.get(section, "n_train", _int, default.n_train),
        pfa=src.get(section, "pfa", _float, default.pfa),
        threshold_factor_override=src.get(section, "threshold_factor", _float, None),
    )


def _methods(src: _Source, text: str, section: str, key: str) -> tuple[MitigationMethod, ...]:
    text = text.strip().lower()
    if text == "both":
        return (MitigationMethod.CFAR_Z, MitigationMethod.CFAR_AC)
    try:
        return (MitigationMethod(text),)
    except ValueError as exc:
        raise src.error(f"unknown mitigation method {text!r} (use cfar_z, cfar_ac or both)", section, key) from exc


def parse_scenario(text: str, path: str = "<string>") -> ScenarioConfig:
    src = _Source(text, path)
    if not src.has("victim"):
        raise ConfigError("missing section [victim]", path)
    victim = _sweep(src, "victim")
    if victim.K <= 0:
        raise src.error("victim sweep slope K must be positive", "victim", "K")

    targets = []
    for sec in src.sections("target"):
        rng = src.get(sec, "range", _float)
        amp = src.get(sec, "amplitude", _complex, 1.0)
        phase = src.get(sec, "phase_deg", _float, 0.0)
        tgt = src.build(sec, "range", Target, rng, amp * cmath.exp(1j * math.radians(phase)))
        fb = victim.beat_frequency(tgt.range)
        if fb > victim.f_cut:
            raise src.error(
                f"target at {tgt.range} m beats at {fb:.6g} Hz, above f_cut = {victim.f_cut:.6g} Hz "
                f"(max range {victim.max_range:.4g} m)",
                sec,
                "range",
            )
        targets.append(tgt)

    interferers = []
    for sec in src.sections("interferer"):
        agg = _sweep(src, sec, defaults=victim)
        amp = src.get(sec, "amplitude", _complex, 1.0)
        phase = src.get(sec, "phase_deg", _float, 0.0)
        t_start = src.get(sec, "t_start", _float)
        interferers.append(InterferenceSpec(agg, t_start, amp * cmath.exp(1j * math.radians(phase))))

    snr_db = src.get("scenario", "snr_db", _float, math.inf)
    if snr_db == -math.inf:
        raise src.error("snr_db = -inf is not allowed", "scenario", "snr_db")
    if math.isfinite(snr_db) and not targets:
        raise src.error("a finite snr_db needs at least one target as the noise reference", "scenario", "snr_db")
    seed = src.get("scenario", "seed", _int, 0)

    cfar = _cfar(src, "cfar", CfarParams())
    se = src.build(
        "dilation",
        "radius",
        make_se,
        src.get("dilation", "shape", str.strip, "octagon"),
        src.get("dilation", "radius", _int, 3),
    )
    methods = _methods(src, src.get("mitigation", "method", str, "both"), "mitigation", "method")
    pipeline = PipelineConfig(_stft(src), cfar, se, methods[-1])

    rp = RangeProfileSettings(
        nfft=src.get("range_profile", "nfft", _int, 4096),
        window=src.get("range_profile", "window", str.strip, "hann"),
        cfar=_cfar(src, "range_profile", CfarParams(1, 10, 1e-4)),
    )
    if rp.nfft < victim.n_samples:
        raise src.error(f"range_profile nfft ({rp.nfft}) is shorter than the sweep", "range_profile", "nfft")

    out_dir = Path(src.get("output", "dir", str.strip, "out"))
    return ScenarioConfig(victim, tuple(targets), tuple(interferers), snr_db, seed, pipeline, rp, out_dir, methods, path)


def load_scenario(path: str | Path) -> ScenarioConfig:
    p = resolve(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc.strerror}", str(path)) from exc
    return parse_scenario(text, str(p))


def load_montecarlo(path: str | Path) -> MonteCarloSpec:
    """Monte-Carlo settings from a ``[montecarlo]`` section.

    The base scenario is the same file unless ``scenario = other.scenario``
    points elsewhere (relative paths resolve against this file).
    """
    p = resolve(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from exc
    src = _Source(text, str(p))
    s = "montecarlo"
    if not src.has(s):
        raise ConfigError("missing section [montecarlo]", str(p))
    if src.has(s, "scenario"):
        ref = Path(src.raw(s, "scenario").strip())
        target = ref if ref.is_absolute() else p.parent / ref
        base = load_scenario(target if target.exists() else ref)
    else:
        base = parse_scenario(text, str(p))
    grid = src.get(s, "snr_grid", _floats)
    if not grid:
        raise src.error("snr_grid is empty", s, "snr_grid")
    runs = src.get(s, "runs_per_level", _int)
    if runs < 1:
        raise src.error("runs_per_level must be >= 1", s, "runs_per_level")
    pct = src.get(s, "percentiles", _floats, (25.0, 75.0))
    if any(not 0 <= q <= 100 for q in pct):
        raise src.error("percentiles must lie in [0, 100]", s, "percentiles")
    seed_base = src.get(s, "seed_base", _int, base.seed)
    return MonteCarloSpec(tuple(grid), runs, base, tuple(pct), seed_base)
