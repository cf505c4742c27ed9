"""Surrogate AF electrograms, drifting powerline interference, SIR mixing.

The electrogram surrogate is a train of biphasic deflections (first
derivative of a Gaussian, positive lobe first) at uniformly jittered
activation intervals. It stands in for a full tissue/electrode model: it
keeps sharp deflections with substantial energy around the mains frequency,
which is what makes notch filtering distort the morphology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import butter, sosfiltfilt

from .signal import ParameterError, Signal, power

_LOBE_PEAK = math.exp(-0.5)  # max of u * exp(-u**2 / 2), reached at |u| = 1
_SIGMAS_PER_HALF_WIDTH = 3.0


@dataclass(frozen=True)
class EgmSynthParams:
    """Surrogate electrogram parameters.

    ``deflection_width_ms`` is the half-width of one biphasic deflection:
    from its zero crossing to where either lobe has decayed to about 5% of
    its peak, i.e. three Gaussian sigmas.
    """

    duration_s: float = 10.0
    activation_interval_ms: tuple[float, float] = (120.0, 200.0)
    deflection_width_ms: float = 8.0
    width_jitter: float = 0.2
    amplitude_mv: float = 1.0
    amplitude_jitter: float = 0.3
    polarity_flip_prob: float = 0.1

    def __post_init__(self):
        lo, hi = self.activation_interval_ms
        if not self.duration_s > 0:
            raise ParameterError("duration_s must be positive")
        if not 0 < lo <= hi:
            raise ParameterError(f"activation interval must satisfy 0 < lo <= hi, got {(lo, hi)}")
        if not self.deflection_width_ms > 0:
            raise ParameterError("deflection_width_ms must be positive")
        if self.amplitude_mv < 0:
            raise ParameterError("amplitude_mv must be non-negative")
        for name in ("width_jitter", "amplitude_jitter"):
            if not 0 <= getattr(self, name) < 1:
                raise ParameterError(f"{name} must be in [0, 1)")
        if not 0 <= self.polarity_flip_prob <= 1:
            raise ParameterError("polarity_flip_prob must be in [0, 1]")


@dataclass(frozen=True)
class PliParams:
    """Powerline interference parameters (fundamental plus harmonics)."""

    base_freq_hz: float = 50.0
    n_harmonics: int = 3
    amp_mod_depth: float = 0.10
    freq_dev_hz: float = 0.1
    mod_bandwidth_hz: float = 0.5
    harmonic_rel_amps: tuple[float, ...] = field(default=(1.0, 0.4, 0.2))

    def __post_init__(self):
        if not self.base_freq_hz > 0:
            raise ParameterError("base_freq_hz must be positive")
        if self.n_harmonics < 1:
            raise ParameterError("n_harmonics must be >= 1")
        if len(self.harmonic_rel_amps) < self.n_harmonics:
            raise ParameterError(
                f"need {self.n_harmonics} harmonic amplitudes, got {len(self.harmonic_rel_amps)}"
            )
        if any(a < 0 for a in self.harmonic_rel_amps):
            raise ParameterError("harmonic amplitudes must be non-negative")
        if not 0 <= self.amp_mod_depth < 1:
            raise ParameterError("amp_mod_depth must be in [0, 1)")
        if self.freq_dev_hz < 0:
            raise ParameterError("freq_dev_hz must be non-negative")
        if not self.mod_bandwidth_hz > 0:
            raise ParameterError("mod_bandwidth_hz must be positive")

    @property
    def frequencies(self) -> list[float]:
        return [h * self.base_freq_hz for h in range(1, self.n_harmonics + 1)]


def activation_times(params: EgmSynthParams, rng: np.random.Generator) -> np.ndarray:
    """Activation instants in seconds within ``[0, duration_s)``."""
    lo, hi = (v / 1000 for v in params.activation_interval_ms)
    # start inside the shortest interval so the count stays in
    # [duration/hi, duration/lo]
    t = rng.uniform(0, lo)
    times = []
    while t < params.duration_s:
        times.append(t)
        t += rng.uniform(lo, hi)
    return np.array(times)


def synth_egm(params: EgmSynthParams, fs: float, rng: np.random.Generator) -> Signal:
    """Zero-mean train of biphasic deflections sampled at ``fs``."""
    if fs < 500:
        raise ParameterError(f"fs must be >= 500 Hz, got {fs}")
    sigma0 = params.deflection_width_ms / _SIGMAS_PER_HALF_WIDTH / 1000
    min_sigma = sigma0 * (1 - params.width_jitter)
    if min_sigma * fs < 1:
        raise ParameterError(
            f"fs {fs} Hz cannot resolve a {params.deflection_width_ms} ms deflection"
        )
    n = int(round(params.duration_s * fs))
    t = np.arange(n) / fs
    x = np.zeros(n)
    times = activation_times(params, rng)
    for tk in times:
        sigma = sigma0 * (1 + rng.uniform(-1, 1) * params.width_jitter)
        amp = params.amplitude_mv * (1 + rng.uniform(-1, 1) * params.amplitude_jitter)
        if rng.random() < params.polarity_flip_prob:
            amp = -amp
        lo = max(0, int(np.floor((tk - 6 * sigma) * fs)))
        hi = min(n, int(np.ceil((tk + 6 * sigma) * fs)) + 1)
        u = (t[lo:hi] - tk) / sigma
        x[lo:hi] += -amp * u * np.exp(-0.5 * u**2) / _LOBE_PEAK
    x -= x.mean()
    return Signal(x, fs)


def _bounded_walk(n: int, fs: float, bandwidth_hz: float, rng: np.random.Generator) -> np.ndarray:
    """Low-pass filtered white noise scaled to a peak magnitude of one."""
    noise = rng.standard_normal(n)
    cutoff = min(bandwidth_hz / (fs / 2), 0.99)
    sos = butter(2, cutoff, output="sos")
    walk = sosfiltfilt(sos, noise)
    peak = np.max(np.abs(walk))
    return walk / peak if peak > 0 else walk


def synth_pli(params: PliParams, duration_s: float, fs: float, rng: np.random.Generator) -> Signal:
    """Harmonic interference with slow random amplitude and frequency drift.

    Each harmonic ``h`` is ``a_h(t) * sin(phi_h + 2 pi / fs * cumsum(h f0 + d_h))``
    with ``a_h = rel_amp_h * (1 + depth * m_h(t))`` and ``|d_h| <= freq_dev_hz``.
    """
    top = params.base_freq_hz * params.n_harmonics
    if top >= fs / 2:
        raise ParameterError(f"harmonic at {top} Hz violates Nyquist for fs {fs} Hz")
    if not duration_s > 0:
        raise ParameterError("duration_s must be positive")
    n = int(round(duration_s * fs))
    x = np.zeros(n)
    for h in range(1, params.n_harmonics + 1):
        phase0 = rng.uniform(0, 2 * np.pi)
        amp_walk = _bounded_walk(n, fs, params.mod_bandwidth_hz, rng)
        freq_walk = _bounded_walk(n, fs, params.mod_bandwidth_hz, rng)
        amp = params.harmonic_rel_amps[h - 1] * (1 + params.amp_mod_depth * amp_walk)
        inst_freq = h * params.base_freq_hz + params.freq_dev_hz * freq_walk
        phase = phase0 + 2 * np.pi / fs * np.concatenate(([0.0], np.cumsum(inst_freq[:-1])))
        x += amp * np.sin(phase)
    return Signal(x, fs)


def sir_db(clean: Signal, interference: Signal) -> float:
    """``10 log10(power(clean) / power(interference))``."""
    return 10 * math.log10(power(clean) / power(interference))


def mix_at_sir(clean: Signal, pli: Signal, sir_db: float) -> tuple[Signal, Signal]:
    """Scale ``pli`` to the requested SIR and add it to ``clean``.

    ``sir_db = inf`` yields a zero interference. Returns ``(noisy, scaled_pli)``.
    """
    if len(clean) != len(pli) or clean.sample_rate != pli.sample_rate:
        raise ParameterError("clean and pli must share length and sample rate")
    if math.isnan(sir_db) or sir_db == -math.inf:
        raise ParameterError(f"invalid SIR {sir_db}")
    p_clean = power(clean)
    if p_clean <= 0:
        raise ParameterError("clean signal has zero power")
    if sir_db == math.inf:
        scaled = pli.scaled(0.0)
    else:
        p_pli = power(pli)
        if p_pli <= 0:
            raise ParameterError("interference has zero power")
        scaled = pli.scaled(math.sqrt(p_clean / (p_pli * 10 ** (sir_db / 10))))
    return clean + scaled, scaled
