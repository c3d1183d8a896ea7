"""CFAR-detector-based interference mitigation for FMCW radar beat signals."""

from .cfar import CfarParams, DetectionMask, detect_map, detect_row, threshold_factor
from .config import MonteCarloSpec, ScenarioConfig, load_montecarlo, load_scenario
from .errors import (
    CfarImError,
    ColaViolation,
    ConfigError,
    EmptyConfig,
    FormatError,
    IoError,
    PipelineError,
    RowTooShort,
    ShapeMismatch,
    SignalTooShort,
    TargetOutOfBand,
    ZeroPowerReference,
    ZeroReference,
    ZeroSignal,
)
from .metrics import IMReport, RangeProfile, corr_coeff, evaluate, range_profile, rp_cfar_detect, sinr
from .mitigation import (
    MitigationMethod,
    MitigationResult,
    PipelineConfig,
    apply_cfar_ac,
    apply_cfar_z,
    mitigate_both,
    mitigate_sweep,
    run_pipeline,
)
from .morphology import StructuringElement, dilate, make_se
from .signal_model import (
    C,
    ComplexSignal,
    InterferenceSpec,
    Scene,
    SweepConfig,
    Target,
    add_noise,
    synth_beat,
    synth_interference,
    synth_scene,
)
from .tf_analysis import Spectrogram, StftConfig, TfSpectrum, istft, spectrogram, stft

__version__ = "0.1.0"
