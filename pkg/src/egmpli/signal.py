"""Signal container, seeding, power and spectrum utilities, CSV I/O."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_SAMPLE_RATE = 1000.0


class ParameterError(ValueError):
    """Invalid parameter or input value."""


class StructuralError(ValueError):
    """Inconsistent shapes or incomplete data structures."""


class DataError(ValueError):
    """Malformed or unreadable signal data."""


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real waveform.

    Attributes:
        samples: 1-D read-only array of amplitudes.
        sample_rate: Sampling rate in Hz.
    """

    samples: np.ndarray
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        samples = _frozen(self.samples)
        if samples.ndim != 1 or samples.size == 0:
            raise ParameterError("signal must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("signal contains non-finite samples")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ParameterError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", float(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    @property
    def time(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate

    def with_samples(self, samples) -> "Signal":
        """Same sample rate, new samples."""
        return Signal(samples, self.sample_rate)

    def __add__(self, other: "Signal") -> "Signal":
        check_compatible(self, other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other: "Signal") -> "Signal":
        check_compatible(self, other)
        return self.with_samples(self.samples - other.samples)

    def scaled(self, gain: float) -> "Signal":
        return self.with_samples(gain * self.samples)


def check_compatible(a: Signal, b: Signal) -> None:
    if len(a) != len(b):
        raise ParameterError(f"length mismatch: {len(a)} vs {len(b)}")
    if a.sample_rate != b.sample_rate:
        raise ParameterError(f"sample rate mismatch: {a.sample_rate} vs {b.sample_rate}")


@dataclass(frozen=True)
class Spectrum:
    """Single-sided amplitude spectrum.

    Bin ``k`` sits at ``k * bin_width`` Hz.
    """

    magnitudes: np.ndarray
    bin_width: float

    def __post_init__(self):
        mags = _frozen(self.magnitudes)
        if np.any(mags < 0) or not np.all(np.isfinite(mags)):
            raise ParameterError("spectrum magnitudes must be finite and non-negative")
        object.__setattr__(self, "magnitudes", mags)

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.magnitudes.size) * self.bin_width

    def bin_of(self, freq_hz: float) -> int:
        return int(round(freq_hz / self.bin_width))


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic generator for ``seed`` and an optional stream path.

    ``make_rng(seed, record, k)`` gives an independent, reproducible stream per
    ``(record, k)`` without depending on the order streams are created in.
    """
    if seed < 0 or seed >= 2**64:
        raise ParameterError("seed must be a 64-bit unsigned integer")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def power(signal: Signal) -> float:
    """Mean of squared samples."""
    x = signal.samples
    return float(np.dot(x, x) / x.size)


def rms(signal: Signal) -> float:
    return float(np.sqrt(power(signal)))


def amplitude_spectrum(signal: Signal) -> Spectrum:
    """Single-sided amplitude spectrum of the whole record, no window.

    Interior bins are scaled by 2/N so an on-bin sinusoid of amplitude A
    reads A; DC and (for even N) Nyquist are scaled by 1/N.
    """
    n = len(signal)
    mags = np.abs(np.fft.rfft(signal.samples)) / n
    last = mags.size - 1 if n % 2 == 0 else mags.size
    mags[1:last] *= 2.0
    return Spectrum(mags, signal.sample_rate / n)


def power_spectrum(x: np.ndarray, rate: float) -> tuple[np.ndarray, np.ndarray]:
    """One-sided periodogram in power per bin.

    Bins sum to the mean square of ``x``. Returns ``(freqs, powers)``.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    p = np.abs(np.fft.rfft(x)) ** 2 / n**2
    last = p.size - 1 if n % 2 == 0 else p.size
    p[1:last] *= 2.0
    return np.fft.rfftfreq(n, 1.0 / rate), p


# -- CSV ---------------------------------------------------------------------

def write_signal_csv(signal: Signal, path: str | Path, index: bool = True) -> None:
    """Write ``# sample_rate=<Hz>`` then one ``index,amplitude`` row per sample."""
    lines = [f"# sample_rate={signal.sample_rate!r}"]
    if index:
        lines.extend(f"{i},{v:.17g}" for i, v in enumerate(signal.samples))
    else:
        lines.extend(f"{v:.17g}" for v in signal.samples)
    Path(path).write_text("\n".join(lines) + "\n")


def read_signal_csv(path: str | Path, sample_rate: float | None = None) -> Signal:
    """Read a signal CSV with or without the index column.

    ``sample_rate`` is used only when the file has no header.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    fs = sample_rate
    values = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line.lstrip("#").strip().partition("=")
            if key.strip() == "sample_rate":
                try:
                    fs = float(val)
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: bad sample_rate {val!r}") from exc
            continue
        fields = line.split(",")
        if len(fields) not in (1, 2):
            raise DataError(f"{path}:{lineno}: expected 1 or 2 columns, got {len(fields)}")
        try:
            values.append(float(fields[-1]))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad amplitude {fields[-1]!r}") from exc
    if fs is None:
        raise DataError(f"{path}: missing '# sample_rate=' header")
    if not values:
        raise DataError(f"{path}: no samples")
    try:
        return Signal(values, fs)
    except ParameterError as exc:
        raise DataError(f"{path}: {exc}") from exc
