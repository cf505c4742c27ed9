"""Signed correlation index (SCI) in the time and frequency domains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import ParameterError, Signal, amplitude_spectrum, check_compatible

REPORT_MODES = ("raw", "match_percent")


@dataclass(frozen=True)
class SciConfig:
    xi_fraction: float = 0.05
    report_mode: str = "match_percent"

    def __post_init__(self):
        if not self.xi_fraction > 0:
            raise ParameterError("xi_fraction must be positive")
        if self.report_mode not in REPORT_MODES:
            raise ParameterError(f"report_mode must be one of {REPORT_MODES}")


@dataclass(frozen=True)
class SciResult:
    """``raw`` is the mean of the +1/-1 agreement scores, in [-1, 1]."""

    raw: float
    xi_used: float
    n_samples: int

    @property
    def match_percent(self) -> float:
        """Percentage of samples that agree within ``xi_used``."""
        return 100.0 * (self.raw + 1.0) / 2.0

    def value(self, mode: str = "match_percent") -> float:
        return self.match_percent if mode == "match_percent" else self.raw

    def as_dict(self, domain: str) -> dict:
        return {
            "raw": self.raw,
            "match_percent": self.match_percent,
            "domain": domain,
            "xi_used": self.xi_used,
            "n_samples": self.n_samples,
        }


def sci(reference: np.ndarray, test: np.ndarray, xi_fraction: float = 0.05) -> SciResult:
    """SCI of two equal-length vectors; the threshold follows ``reference``.

    Each sample scores +1 if ``|reference - test| <= xi`` and -1 otherwise,
    with ``xi = xi_fraction * std(reference)``.
    """
    reference = np.asarray(reference, dtype=float)
    test = np.asarray(test, dtype=float)
    if reference.shape != test.shape:
        raise ParameterError(f"length mismatch: {reference.size} vs {test.size}")
    sd = float(np.std(reference))
    if sd == 0:
        raise ParameterError("reference has zero variance")
    xi = xi_fraction * sd
    agree = np.count_nonzero(np.abs(reference - test) <= xi)
    n = reference.size
    return SciResult((2 * agree - n) / n, xi, n)


def sci_time(reference: Signal, test: Signal, cfg: SciConfig = SciConfig()) -> SciResult:
    """Sample-wise SCI. Argument order matters: ``reference`` is the clean record."""
    check_compatible(reference, test)
    return sci(reference.samples, test.samples, cfg.xi_fraction)


def sci_freq(reference: Signal, test: Signal, cfg: SciConfig = SciConfig()) -> SciResult:
    """SCI of the single-sided amplitude spectra, DC to Nyquist."""
    check_compatible(reference, test)
    return sci(
        amplitude_spectrum(reference).magnitudes,
        amplitude_spectrum(test).magnitudes,
        cfg.xi_fraction,
    )
