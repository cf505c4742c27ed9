"""Joint notch + wavelet interference removal, and the plain notch reference.

The wavelet method runs in four steps:

1. A notch (by default one per interference harmonic) is applied to the
   noisy record; what it removes is taken as an interference estimate.
2. The estimate is decomposed and, at each detail scale, the power of its
   coefficients inside narrow bands around the aliased images of the
   interference frequencies gives a per-scale threshold
   ``gain * sqrt(2 * P_j)``, the amplitude of a tone with that power.
3. The noisy record is decomposed and each detail scale is soft-thresholded.
4. The inverse transform gives the cleaned record.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .notch import design_notch, filtfilt_cascade
from .signal import ParameterError, Signal, power_spectrum
from .wavelet import MAX_LEVELS, alias_through_cascade, dwt, get_bank, idwt


@dataclass(frozen=True)
class DenoiseConfig:
    notch_center_hz: float = 50.0
    notch_bw_hz: float = 2.0
    levels: int = 5
    threshold_gain: float = 1.0
    pli_band_halfwidth_hz: float = 1.5
    wavelet_family: str = "coif2"
    threshold_approximation: bool = False
    n_harmonics: int = 3
    estimate_harmonics: bool = True
    reference_harmonics: bool = True

    def __post_init__(self):
        if not 1 <= self.levels <= MAX_LEVELS:
            raise ParameterError(f"levels must be in 1..{MAX_LEVELS}")
        for name in ("notch_center_hz", "notch_bw_hz", "threshold_gain", "pli_band_halfwidth_hz"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if self.n_harmonics < 1:
            raise ParameterError("n_harmonics must be >= 1")
        get_bank(self.wavelet_family)

    @property
    def pli_frequencies(self) -> list[float]:
        return [h * self.notch_center_hz for h in range(1, self.n_harmonics + 1)]

    def notches(self, fs: float, harmonics: bool):
        if harmonics:
            freqs = [f for f in self.pli_frequencies if f + self.notch_bw_hz / 2 < fs / 2]
            return [design_notch(f, self.notch_bw_hz, fs) for f in freqs]
        return [design_notch(self.notch_center_hz, self.notch_bw_hz, fs)]


@dataclass(frozen=True)
class ScaleThresholds:
    """Per detail scale (index 0 = finest) threshold and interference power."""

    lambdas: tuple[float, ...]
    source_power: tuple[float, ...]
    gain: float = 1.0

    @property
    def levels(self) -> int:
        return len(self.lambdas)


def estimate_pli(noisy: Signal, cfg: DenoiseConfig = DenoiseConfig()) -> Signal:
    """What the notch removes: ``noisy - notch(noisy)``."""
    notched = filtfilt_cascade(cfg.notches(noisy.sample_rate, cfg.estimate_harmonics), noisy)
    return noisy - notched


def band_mask(freqs: np.ndarray, centers, halfwidth: float) -> np.ndarray:
    mask = np.zeros(freqs.shape, dtype=bool)
    for c in centers:
        mask |= np.abs(freqs - c) <= halfwidth
    return mask


def estimate_scale_powers(pli_estimate: Signal, cfg: DenoiseConfig = DenoiseConfig()) -> ScaleThresholds:
    """Interference power in each detail scale from the coefficient spectra.

    Every interference frequency is followed through the decimation cascade
    to its image at scale ``j``; the coefficient periodogram is summed over
    the union of ``image +/- pli_band_halfwidth_hz``.
    """
    fs = pli_estimate.sample_rate
    bank = get_bank(cfg.wavelet_family)
    decomp = dwt(pli_estimate, bank, cfg.levels)
    powers = []
    for j, coeffs in enumerate(decomp.details, start=1):
        rate = fs / 2**j
        freqs, pxx = power_spectrum(coeffs, rate)
        images = [alias_through_cascade(f, j, fs) for f in cfg.pli_frequencies]
        powers.append(float(pxx[band_mask(freqs, images, cfg.pli_band_halfwidth_hz)].sum()))
    lambdas = tuple(cfg.threshold_gain * float(np.sqrt(2 * p)) for p in powers)
    return ScaleThresholds(lambdas, tuple(powers), cfg.threshold_gain)


def soft_threshold(coeffs, lam: float) -> np.ndarray:
    """``sign(w) * max(|w| - lam, 0)`` element-wise."""
    if lam < 0:
        raise ParameterError(f"threshold must be non-negative, got {lam}")
    w = np.asarray(coeffs, dtype=float)
    return np.sign(w) * np.maximum(np.abs(w) - lam, 0.0)


def denoise_wavelet(noisy: Signal, cfg: DenoiseConfig = DenoiseConfig()) -> Signal:
    """Notch-guided soft thresholding of the noisy record's wavelet coefficients."""
    if len(noisy) < 2**cfg.levels:
        raise ParameterError(f"need at least {2**cfg.levels} samples for {cfg.levels} levels")
    thresholds = estimate_scale_powers(estimate_pli(noisy, cfg), cfg)
    return apply_thresholds(noisy, thresholds, cfg)


def apply_thresholds(noisy: Signal, thresholds: ScaleThresholds, cfg: DenoiseConfig = DenoiseConfig()) -> Signal:
    bank = get_bank(cfg.wavelet_family)
    decomp = dwt(noisy, bank, cfg.levels)
    details = [soft_threshold(d, lam) for d, lam in zip(decomp.details, thresholds.lambdas)]
    decomp = decomp.with_details(details)
    if cfg.threshold_approximation:
        # the deepest scale's threshold stands in for the approximation band
        decomp = decomp.with_approximation(soft_threshold(decomp.approximation, thresholds.lambdas[-1]))
    return idwt(decomp, bank)


def denoise_notch(noisy: Signal, cfg: DenoiseConfig = DenoiseConfig()) -> Signal:
    """Reference method: zero-phase notch filtering."""
    return filtfilt_cascade(cfg.notches(noisy.sample_rate, cfg.reference_harmonics), noisy)


METHODS = {"wavelet": denoise_wavelet, "notch": denoise_notch}
