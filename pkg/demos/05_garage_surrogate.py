"""Recorded-data flow on a synthetic stand-in for a measured garage scene.

The sweep is written as a cf32 IQ capture, read back as if it came from a
radar board, then mitigated without any ground truth.

    python demos/05_garage_surrogate.py
"""

import tempfile
from pathlib import Path

from cfarim import load_scenario
from cfarim.fileio import check_capture, read_iq, write_iq
from cfarim.runner import process_signal, synthesize

cfg = load_scenario("exp_v.scenario")
scene = synthesize(cfg)

with tempfile.TemporaryDirectory() as tmp:
    path = write_iq(Path(tmp) / "garage.iq", scene.observed, cfg.victim)
    print(f"wrote {path.stat().st_size} bytes + header")
    cap = read_iq(path)
    check_capture(cap, cfg.victim, path)

run = process_signal(cap.signal, None, cfg)
print(f"range bin {run.before.rp.resolution * 100:.1f} cm, R_max {cfg.victim.max_range:.1f} m")
print("configured reflectors:", [t.range for t in cfg.targets])
for name, rep in [("raw", run.before)] + [(m.value, r) for m, r in run.after.items()]:
    print(f"{name:8s} detections: {[round(r, 2) for r, _ in rep.detections]}")
