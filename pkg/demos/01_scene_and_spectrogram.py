"""Walk through the simulated scene: beat tones, interference pulses, spectrogram.

    python demos/01_scene_and_spectrogram.py
"""

import numpy as np

from cfarim import load_scenario, spectrogram, stft, synth_scene
from cfarim.metrics import sinr
from cfarim.signal_model import interference_gate

cfg = load_scenario("table1.scenario")
v = cfg.victim
print(f"victim: K = {v.K / 1e12:g} MHz/us, fs = {v.fs / 1e6:g} MHz, {v.n_samples} samples, R_max = {v.max_range:.1f} m")
for t in cfg.targets:
    print(f"  target {t.range:6.1f} m  |a| = {abs(t.amplitude):.2f}  beat {-v.beat_frequency(t.range) / 1e6:+.3f} MHz")

scene = synth_scene(cfg.targets, cfg.interferers, v, cfg.snr_db, cfg.seed)
t = v.times()
for i, spec in enumerate(cfg.interferers, 1):
    g = interference_gate(spec, v)
    on = t[g]
    print(
        f"  interferer {i}: K = {spec.aggressor.K / 1e12:g} MHz/us, pulse {on[0] * 1e6:.2f}-{on[-1] * 1e6:.2f} us "
        f"({g.sum()} samples), |A| = {abs(spec.amplitude):.1f}"
    )

# the pulses are short but strong enough to bury the sweep
print(f"input SINR {sinr(scene.observed, scene.clean):.2f} dB at SNR {cfg.snr_db:g} dB")

spec = stft(scene.observed, cfg.pipeline.stft)
p = spectrogram(spec).power
print(f"STFT: {spec.shape[0]} bins x {spec.shape[1]} frames (hop {cfg.pipeline.stft.hop})")

# targets are horizontal lines: their bins carry steady power over time
freqs = spec.frequencies()
for tgt in cfg.targets:
    k = int(np.argmin(np.abs(freqs + v.beat_frequency(tgt.range))))
    row = p[k, 40:-40]
    print(f"  bin {k:3d} ({freqs[k] / 1e6:+.2f} MHz): median {10 * np.log10(np.median(row)):.1f} dB, "
          f"max {10 * np.log10(row.max()):.1f} dB")
# interference pulses sweep through every bin within a few dozen frames
col_energy = p.sum(axis=0)
top = np.sort(np.argsort(col_energy)[-5:])
print("frames with the most energy:", top.tolist(), "at", np.round(spec.times()[top] * 1e6, 1).tolist(), "us")
