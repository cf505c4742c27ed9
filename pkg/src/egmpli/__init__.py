"""Powerline interference removal for atrial electrograms.

Joint notch plus wavelet soft-thresholding denoiser, a plain notch
reference, a surrogate electrogram synthesizer and an SCI benchmark.
"""

from .bench import SciReport, emit_figure_data, render_table, run_benchmark
from .config import BenchConfig, ConfigError, load_config, parse_config
from .denoise import DenoiseConfig, denoise_notch, denoise_wavelet, estimate_pli, estimate_scale_powers, soft_threshold
from .metrics import SciConfig, SciResult, sci, sci_freq, sci_time
from .notch import BiquadNotch, design_notch, filtfilt, frequency_response
from .signal import (
    DataError,
    ParameterError,
    Signal,
    StructuralError,
    amplitude_spectrum,
    make_rng,
    read_signal_csv,
    write_signal_csv,
)
from .synthesis import EgmSynthParams, PliParams, mix_at_sir, sir_db, synth_egm, synth_pli
from .wavelet import QuadFilterBank, WaveletDecomposition, coif2_filters, dwt, idwt

__version__ = "0.1.0"

__all__ = [
    "BenchConfig", "BiquadNotch", "ConfigError", "DataError", "DenoiseConfig", "EgmSynthParams",
    "ParameterError", "PliParams", "QuadFilterBank", "SciConfig", "SciReport", "SciResult", "Signal",
    "StructuralError", "WaveletDecomposition", "amplitude_spectrum", "coif2_filters", "denoise_notch",
    "denoise_wavelet", "design_notch", "dwt", "emit_figure_data", "estimate_pli", "estimate_scale_powers",
    "filtfilt", "frequency_response", "idwt", "load_config", "make_rng", "mix_at_sir", "parse_config",
    "read_signal_csv", "render_table", "run_benchmark", "sci", "sci_freq", "sci_time", "sir_db",
    "soft_threshold", "synth_egm", "synth_pli", "write_signal_csv",
]
