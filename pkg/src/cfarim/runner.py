"""Scenario execution, Monte-Carlo SNR sweeps and timing, independent of file output."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import MonteCarloSpec, ScenarioConfig
from .fileio import quantize
from .metrics import IMReport, corr_coeff, evaluate, sinr
from .mitigation import MitigationMethod, MitigationResult, PipelineConfig, mitigate_both, run_pipeline
from .signal_model import ComplexSignal, Scene, synth_scene

METRICS = ("sinr_db", "rho_abs", "rho_phase_rad")


@dataclass(frozen=True, eq=False)
class ScenarioRun:
    observed: ComplexSignal
    reference: ComplexSignal | None
    results: dict[MitigationMethod, MitigationResult]
    before: IMReport
    after: dict[MitigationMethod, IMReport]
    scene: Scene | None = None


def synthesize(cfg: ScenarioConfig) -> Scene:
    return synth_scene(cfg.targets, cfg.interferers, cfg.victim, cfg.snr_db, cfg.seed)


def _mitigate(sig: ComplexSignal, pipeline: PipelineConfig, methods) -> dict[MitigationMethod, MitigationResult]:
    if len(methods) == 1:
        return {methods[0]: run_pipeline(sig, pipeline.with_method(methods[0]))}
    both = mitigate_both(sig, pipeline)
    return {m: both[m] for m in methods}


def process_signal(
    observed: ComplexSignal,
    reference: ComplexSignal | None,
    cfg: ScenarioConfig,
    methods=None,
) -> ScenarioRun:
    """Mitigate one sweep and score input and outputs against ``reference`` (if any)."""
    methods = tuple(MitigationMethod(m) for m in (methods or cfg.methods))
    results = _mitigate(observed, cfg.pipeline, methods)

    def score(x):
        return evaluate(x, reference, cfg.victim, cfg.rp.cfar, cfg.rp.nfft, cfg.rp.window)

    after = {m: score(r.recovered) for m, r in results.items()}
    return ScenarioRun(observed, reference, results, score(observed), after)


def run_scenario(cfg: ScenarioConfig, methods=None, capture_precision: bool = True) -> ScenarioRun:
    """Synthesize and process the configured scene.

    With ``capture_precision`` the observed and reference sweeps are rounded to
    float32 first, so reprocessing an exported IQ file reproduces the report.
    """
    scene = synthesize(cfg)
    obs, ref = scene.observed, scene.clean
    if capture_precision:
        obs, ref = quantize(obs), quantize(ref)
    run = process_signal(obs, ref, cfg, methods)
    return replace(run, scene=scene)


@dataclass(frozen=True)
class McRecord:
    snr_db: float
    run: int
    seed: int
    method: MitigationMethod
    sinr_in_db: float
    sinr_db: float
    rho_abs: float
    rho_phase_rad: float


def _mc_job(args) -> list[McRecord]:
    base, snr, run, seed, methods = args
    cfg = base.with_snr(snr).with_seed(seed)
    scene = synthesize(cfg)
    res = _mitigate(scene.observed, cfg.pipeline, methods)
    s_in = sinr(scene.observed, scene.clean)
    out = []
    for m in methods:
        rec = res[m].recovered
        rho = corr_coeff(rec, scene.clean)
        out.append(McRecord(snr, run, seed, m, s_in, sinr(rec, scene.clean), abs(rho), math.atan2(rho.imag, rho.real)))
    return out


def monte_carlo(spec: MonteCarloSpec, methods=None, workers: int = 1) -> list[McRecord]:
    """Every (SNR level, run) pair with seed ``seed_base + run``."""
    methods = tuple(MitigationMethod(m) for m in (methods or (MitigationMethod.CFAR_Z, MitigationMethod.CFAR_AC)))
    jobs = [
        (spec.base_scenario, snr, i, spec.seed_base + i, methods)
        for snr in spec.snr_grid
        for i in range(spec.runs_per_level)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_mc_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [_mc_job(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]


def mc_statistics(records: list[McRecord], percentiles=(25.0, 75.0)) -> list[dict]:
    """min / percentiles / median / max of each metric per (SNR, method)."""
    groups: dict[tuple[float, MitigationMethod], list[McRecord]] = {}
    for r in records:
        groups.setdefault((r.snr_db, r.method), []).append(r)
    rows = []
    for (snr, method), recs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        for metric in METRICS:
            vals = np.array(sorted(getattr(r, metric) for r in recs))
            row = {"snr_db": snr, "method": method.value, "metric": metric, "n_runs": len(vals), "min": vals.min()}
            for q in percentiles:
                row[f"p{q:g}"] = float(np.percentile(vals, q))
            row["median"] = float(np.median(vals))
            row["max"] = vals.max()
            rows.append(row)
    return rows


@dataclass(frozen=True)
class BenchRecord:
    method: MitigationMethod
    hop: int
    n_samples: int
    repeats: int
    median_ms: float
    min_ms: float
    max_ms: float


def bench(cfg: ScenarioConfig, repeats: int = 5, hops=(4, 8), methods=None) -> list[BenchRecord]:
    """Wall-clock time of one full mitigation (STFT to ISTFT) per method and hop."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    methods = tuple(MitigationMethod(m) for m in (methods or cfg.methods))
    sig = synthesize(cfg).observed
    out = []
    for hop in hops:
        stft_cfg = replace(cfg.pipeline.stft, hop=int(hop))
        for m in methods:
            pipe = PipelineConfig(stft_cfg, cfg.pipeline.cfar, cfg.pipeline.se, m)
            run_pipeline(sig, pipe)  # warm caches
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                run_pipeline(sig, pipe)
                times.append((time.perf_counter() - t0) * 1e3)
            out.append(BenchRecord(m, int(hop), len(sig), repeats, float(np.median(times)), min(times), max(times)))
    return out
