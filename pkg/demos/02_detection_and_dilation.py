"""Per-bin CA-CFAR on the spectrogram, and why the guard band must be wide.

An interference pulse lasting a few microseconds still lights up every STFT
frame whose 256-sample window touches it. In a single frequency bin this
shows up as a bump roughly (L + pulse) / hop frames wide. Guard cells
narrower than that put the bump into the training cells and the detector
sees nothing.

    python demos/02_detection_and_dilation.py
"""

from dataclasses import replace

from cfarim import CfarParams, detect_map, dilate, load_scenario, spectrogram, stft, synth_scene

cfg = load_scenario("table1.scenario")
scene = synth_scene(cfg.targets, cfg.interferers, cfg.victim, cfg.snr_db, cfg.seed)
power = spectrogram(stft(scene.interference + scene.clean, cfg.pipeline.stft))
noisy = spectrogram(stft(scene.observed, cfg.pipeline.stft))

print("guard  flags(noise-free)  flags(noisy)")
for g in (2, 16, 50, 100, 140):
    params = replace(cfg.pipeline.cfar, n_guard=g)
    print(f"{g:5d}  {detect_map(power, params).count:17d}  {detect_map(noisy, params).count:12d}")

mask = detect_map(noisy, cfg.pipeline.cfar)
dl = dilate(mask, cfg.pipeline.se)
print(f"\nconfigured detector {cfg.pipeline.cfar}: {mask.count} flags, "
      f"{dl.count} after {cfg.pipeline.se.shape} r={cfg.pipeline.se.radius} dilation "
      f"({100 * dl.count / dl.bits.size:.1f}% of the t-f plane)")
print(f"threshold factor alpha = {CfarParams(100, 16, 1e-3).alpha:.3f} for 2 x 16 training cells")
