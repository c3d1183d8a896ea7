"""Command-line front end.

    cfarim simulate table1.scenario
    cfarim montecarlo fig6_desk.scenario
    cfarim process capture.iq exp_v.scenario --reference clean.iq
    cfarim bench table1.scenario --repeats 20

Exit codes: 0 success, 2 configuration, 3 pipeline, 4 I/O, 5 file format.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import ScenarioConfig, load_montecarlo, load_scenario
from .errors import CfarImError, ConfigError, FormatError, IoError, PipelineError
from .fileio import check_capture, read_iq, write_csv, write_iq, write_matrix
from .mitigation import MitigationMethod
from .runner import METRICS, ScenarioRun, bench, mc_statistics, monte_carlo, process_signal, run_scenario

log = logging.getLogger("cfarim")

EXIT_OK, EXIT_CONFIG, EXIT_PIPELINE, EXIT_IO, EXIT_FORMAT = 0, 2, 3, 4, 5


def _methods(arg: str | None, cfg: ScenarioConfig) -> tuple[MitigationMethod, ...]:
    if arg is None:
        return cfg.methods
    if arg == "both":
        return (MitigationMethod.CFAR_Z, MitigationMethod.CFAR_AC)
    return (MitigationMethod(arg),)


def _out_dir(args, cfg: ScenarioConfig) -> Path:
    out = Path(args.out) if args.out else cfg.outputs
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"{out}: cannot create output directory: {exc.strerror}") from exc
    return out


def _scenario(args) -> ScenarioConfig:
    cfg = load_scenario(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


PLOT_SCRIPT = """\
# gnuplot script for the CSV artifacts in this directory: gnuplot plots.gp
set datafile separator ','
set terminal pngcairo size 1000,700
set key autotitle columnhead

set output 'raw.png'
set xlabel 'time (s)'
plot 'raw.csv' using 2:3 with lines title 'observed I', \\
     'raw.csv' using 2:5 with lines title 'reference I'

set xlabel 'time (s)'
set ylabel 'frequency (Hz)'
set output 'spectrogram.png'
set logscale cb
plot 'spectrogram.csv' matrix rowheaders columnheaders with image notitle
unset logscale cb
set output 'mask_raw.png'
plot 'mask_raw.csv' matrix rowheaders columnheaders with image notitle
set output 'mask_dilated.png'
plot 'mask_dilated.csv' matrix rowheaders columnheaders with image notitle

set output 'range_profiles.png'
set xlabel 'range (m)'
set ylabel 'power (dB)'
plot 'rp_before.csv' using 1:3 with lines title 'before'{after}
"""


def _plot_script(methods) -> str:
    after = "".join(
        f", \\\n     'rp_after.csv' using 2:(strcol(1) eq '{m.value}' ? $4 : NaN) with lines title '{m.value}'"
        for m in methods
    )
    return PLOT_SCRIPT.format(after=after)


def _rp_rows(rp):
    return zip(rp.ranges, rp.power, rp.db())


def write_artifacts(out: Path, run: ScenarioRun, cfg: ScenarioConfig) -> None:
    obs, ref = run.observed, run.reference
    t = obs.times()
    ref_s = ref.samples if ref is not None else np.full(len(obs), np.nan + 1j * np.nan)
    write_csv(
        out / "raw.csv",
        ["n", "t_s", "re", "im", "ref_re", "ref_im"],
        zip(range(len(obs)), t, obs.samples.real, obs.samples.imag, ref_s.real, ref_s.imag),
    )

    first = next(iter(run.results.values()))
    spec = first.spectrum
    freqs = spec.frequencies()
    order = np.argsort(freqs, kind="stable")
    frames = spec.times()
    write_matrix(out / "spectrogram.csv", "freq_hz\\t_s", freqs[order], frames, first.power.power[order])
    write_matrix(out / "mask_raw.csv", "freq_hz\\t_s", freqs[order], frames, first.raw_mask.bits[order].astype(np.uint8))
    write_matrix(
        out / "mask_dilated.csv", "freq_hz\\t_s", freqs[order], frames, first.dilated_mask.bits[order].astype(np.uint8)
    )

    rows = []
    for m, res in run.results.items():
        x = res.recovered.samples
        rows.extend((m.value, i, ti, v.real, v.imag) for i, (ti, v) in enumerate(zip(t, x)))
    write_csv(out / "recovered.csv", ["method", "n", "t_s", "re", "im"], rows)

    write_csv(out / "rp_before.csv", ["range_m", "power", "power_db"], _rp_rows(run.before.rp))
    rows = [(m.value, *r) for m, rep in run.after.items() for r in _rp_rows(rep.rp)]
    write_csv(out / "rp_after.csv", ["method", "range_m", "power", "power_db"], rows)

    stages = [("input", run.before)] + [(m.value, rep) for m, rep in run.after.items()]
    write_csv(
        out / "detections.csv",
        ["stage", "range_m", "power"],
        [(name, r, p) for name, rep in stages for r, p in rep.detections],
    )
    write_csv(
        out / "report.csv",
        ["stage", "snr_db", "seed", "sinr_db", "rho_abs", "rho_phase_rad", "n_detections", "detections_m"],
        [
            (
                name,
                cfg.snr_db,
                cfg.seed,
                rep.sinr_db,
                rep.rho_abs,
                rep.rho_phase,
                len(rep.detections),
                ";".join(f"{r:.4f}" for r, _ in rep.detections),
            )
            for name, rep in stages
        ],
    )
    try:
        (out / "plots.gp").write_text(_plot_script(run.results), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"{out / 'plots.gp'}: cannot write: {exc.strerror}") from exc


def _summary(run: ScenarioRun) -> None:
    stages = [("input", run.before)] + [(m.value, rep) for m, rep in run.after.items()]
    for name, rep in stages:
        dets = ", ".join(f"{r:.2f}" for r, _ in rep.detections)
        print(f"{name:8s} SINR {rep.sinr_db:8.3f} dB  |rho| {rep.rho_abs:.4f}  arg {rep.rho_phase:+.4f}  targets [{dets}] m")


def cmd_simulate(args) -> int:
    cfg = _scenario(args)
    out = _out_dir(args, cfg)
    run = run_scenario(cfg, _methods(args.method, cfg))
    write_artifacts(out, run, cfg)
    write_iq(out / "observed.iq", run.observed, cfg.victim)
    write_iq(out / "reference.iq", run.reference, cfg.victim)
    _summary(run)
    print(f"artifacts written to {out}")
    return EXIT_OK


def cmd_process(args) -> int:
    cfg = _scenario(args)
    cap = read_iq(args.iq)
    check_capture(cap, cfg.victim, args.iq)
    ref = None
    if args.reference:
        rcap = read_iq(args.reference)
        check_capture(rcap, cfg.victim, args.reference)
        ref = rcap.signal
    out = _out_dir(args, cfg)
    run = process_signal(cap.signal, ref, cfg, _methods(args.method, cfg))
    write_artifacts(out, run, cfg)
    _summary(run)
    print(f"artifacts written to {out}")
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    spec = load_montecarlo(args.config)
    if args.seed is not None:
        spec = replace(spec, seed_base=args.seed)
    if args.runs is not None:
        spec = replace(spec, runs_per_level=args.runs)
    cfg = spec.base_scenario
    if args.method is None or args.method == "both":
        methods = (MitigationMethod.CFAR_Z, MitigationMethod.CFAR_AC)
    else:
        methods = (MitigationMethod(args.method),)
    out = _out_dir(args, cfg)
    records = monte_carlo(spec, methods, workers=args.workers)
    stats = mc_statistics(records, spec.percentiles)
    low = [f"p{q:g}" for q in sorted(spec.percentiles) if q < 50]
    high = [f"p{q:g}" for q in sorted(spec.percentiles) if q >= 50]
    cols = ["snr_db", "method", "metric", "n_runs", "min", *low, "median", *high, "max"]
    write_csv(out / "mc_stats.csv", cols, ([row[c] for c in cols] for row in stats))
    write_csv(
        out / "mc_runs.csv",
        ["snr_db", "run", "seed", "method", "sinr_in_db", *METRICS],
        ((r.snr_db, r.run, r.seed, r.method.value, r.sinr_in_db, r.sinr_db, r.rho_abs, r.rho_phase_rad) for r in records),
    )
    for row in stats:
        if row["metric"] == "sinr_db":
            print(f"SNR {row['snr_db']:6.1f} dB  {row['method']:7s} median SINR {row['median']:8.3f} dB")
    print(f"statistics written to {out / 'mc_stats.csv'}")
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = _scenario(args)
    out = _out_dir(args, cfg)
    try:
        hops = tuple(int(h) for h in args.hops.split(","))
    except ValueError as exc:
        raise ConfigError(f"--hops: {exc}") from exc
    if args.repeats < 1:
        raise ConfigError("--repeats must be >= 1")
    recs = bench(cfg, args.repeats, hops, _methods(args.method, cfg))
    write_csv(
        out / "bench.csv",
        ["method", "hop", "n_samples", "repeats", "median_ms", "min_ms", "max_ms"],
        ((r.method.value, r.hop, r.n_samples, r.repeats, r.median_ms, r.min_ms, r.max_ms) for r in recs),
    )
    for r in recs:
        print(f"{r.method.value:7s} hop {r.hop:2d}  median {r.median_ms:8.2f} ms over {r.repeats} runs")
    print(f"timings written to {out / 'bench.csv'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="DIR", default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--seed", type=int, metavar="N", default=argparse.SUPPRESS, help="seed override")
    common.add_argument("--method", choices=("cfar_z", "cfar_ac", "both"), default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="cfarim", description="CFAR-based FMCW interference mitigation.", parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="synthesize a scenario, mitigate and write artifacts")
    s.add_argument("config")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("montecarlo", parents=[common], help="SNR sweep statistics")
    s.add_argument("config")
    s.add_argument("--runs", type=int, help="override runs_per_level")
    s.add_argument("--workers", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_montecarlo)

    s = sub.add_parser("process", parents=[common], help="mitigate a recorded IQ sweep")
    s.add_argument("iq")
    s.add_argument("config")
    s.add_argument("--reference", metavar="IQ", help="clean reference capture for SINR and rho")
    s.set_defaults(func=cmd_process)

    s = sub.add_parser("bench", parents=[common], help="time one mitigation per method and hop")
    s.add_argument("config")
    s.add_argument("--repeats", type=int, default=10)
    s.add_argument("--hops", default="4,8", help="comma-separated hop sizes")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in (("out", None), ("seed", None), ("method", None), ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        code, msg = EXIT_CONFIG, f"configuration error: {exc}"
    except FormatError as exc:
        code, msg = EXIT_FORMAT, f"format error: {exc}"
    except IoError as exc:
        code, msg = EXIT_IO, f"I/O error: {exc}"
    except PipelineError as exc:
        code, msg = EXIT_PIPELINE, f"pipeline error: {exc}"
    except CfarImError as exc:
        code, msg = EXIT_PIPELINE, f"error: {exc}"
    print(f"cfarim: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
