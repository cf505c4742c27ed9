"""Second-order Butterworth notch design and zero-phase filtering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter, lfilter_zi

from .signal import ParameterError, Signal


@dataclass(frozen=True)
class BiquadNotch:
    """Biquad bandstop ``H(z) = B(z)/A(z)`` with ``a[0] == 1``."""

    b: tuple[float, float, float]
    a: tuple[float, float, float]
    center_hz: float
    bandwidth_hz: float
    sample_rate: float

    @property
    def order(self) -> int:
        return len(self.a) - 1

    @property
    def poles(self) -> np.ndarray:
        return np.roots(self.a)

    def settle_samples(self, tol: float = 1e-9) -> int:
        """Samples until the impulse-response envelope decays below ``tol``."""
        r = float(np.max(np.abs(self.poles)))
        return int(np.ceil(np.log(tol) / np.log(r)))


def design_notch(center_hz: float, bandwidth_hz: float, fs: float) -> BiquadNotch:
    """Notch with a null at ``center_hz`` and a -3 dB width of ``bandwidth_hz``.

    First-order Butterworth low-pass prototype, low-pass to bandstop
    transformation, bilinear map. With the prewarped center
    ``W0 = tan(w0/2)`` and analog bandwidth ``B = tan(bw/2) * (1 + W0**2)``
    the digital -3 dB edges are exactly ``bw`` radians apart.
    """
    if not 0 < center_hz < fs / 2:
        raise ParameterError(f"center {center_hz} Hz outside (0, {fs / 2}) Hz")
    if not 0 < bandwidth_hz < 2 * min(center_hz, fs / 2 - center_hz):
        raise ParameterError(f"bandwidth {bandwidth_hz} Hz does not fit around {center_hz} Hz")

    w0 = 2 * np.pi * center_hz / fs
    bw = 2 * np.pi * bandwidth_hz / fs
    w0_sq = np.tan(w0 / 2) ** 2
    band = np.tan(bw / 2) * (1 + w0_sq)

    # analog (s^2 + W0^2) / (s^2 + B s + W0^2) with s = (1 - z^-1) / (1 + z^-1)
    norm = 1 + band + w0_sq
    b = np.array([1 + w0_sq, -2 * (1 - w0_sq), 1 + w0_sq]) / norm
    a = np.array([norm, -2 * (1 - w0_sq), 1 - band + w0_sq]) / norm
    return BiquadNotch(tuple(b), tuple(a), float(center_hz), float(bandwidth_hz), float(fs))


def frequency_response(filt: BiquadNotch, freqs) -> np.ndarray:
    """Complex ``H(exp(j 2 pi f / fs))`` at each frequency in Hz."""
    f = np.atleast_1d(np.asarray(freqs, dtype=float))
    if np.any(f < 0) or np.any(f > filt.sample_rate / 2):
        raise ParameterError("frequencies must lie in [0, fs/2]")
    zinv = np.exp(-2j * np.pi * f / filt.sample_rate)
    num = np.polyval(filt.b[::-1], zinv)
    den = np.polyval(filt.a[::-1], zinv)
    return num / den


def pad_length(filt: BiquadNotch, n: int) -> int:
    """Extension length used by :func:`filtfilt`.

    Long enough for the pole transient to die out, capped by the signal.
    """
    base = 3 * max(len(filt.a), len(filt.b)) - 3
    return min(max(base, filt.settle_samples()), n - 1)


def _tone_fit(seg: np.ndarray, omegas):
    """Least-squares tones at ``omegas`` (plus offset and trend) over ``seg``.

    Returns a callable evaluating the tones at sample positions relative to
    ``seg[0]``.
    """
    k = np.arange(seg.size, dtype=float)
    cols = [f(w * k) for w in omegas for f in (np.cos, np.sin)]
    basis = np.column_stack(cols + [np.ones_like(k), k])
    coef = np.linalg.lstsq(basis, seg, rcond=None)[0][: 2 * len(omegas)]

    def tones(pos):
        pos = np.asarray(pos, dtype=float)
        out = np.zeros_like(pos)
        for i, w in enumerate(omegas):
            out += coef[2 * i] * np.cos(w * pos) + coef[2 * i + 1] * np.sin(w * pos)
        return out

    return tones


def extend(filt: BiquadNotch, x: np.ndarray, npad: int, tone_hz=None) -> np.ndarray:
    """Pad ``x`` by ``npad`` samples on each side.

    Components at ``tone_hz`` (default: the notch frequency) are continued
    as tones; the rest is extended by odd reflection about the endpoint. A
    plain odd reflection flips the phase of a notched tone and the notch
    rings on the seam.
    """
    n = x.size
    freqs = [filt.center_hz] if tone_hz is None else list(tone_hz)
    omegas = [2 * np.pi * f / filt.sample_rate for f in freqs]
    win = min(n, max(4 * filt.order, int(round(filt.sample_rate / filt.bandwidth_hz))))
    # keep the fit well posed on short signals
    if win < 2 * len(omegas) + 2:
        omegas = []
    k = np.arange(1, npad + 1, dtype=float)

    head = _tone_fit(x[:win], omegas)
    inner = x[1:npad + 1] - head(k)
    left = (2 * (x[0] - head(0.0)) - inner + head(-k))[::-1]

    tail = _tone_fit(x[::-1][:win], [-w for w in omegas])
    inner = x[::-1][1:npad + 1] - tail(k)
    right = 2 * (x[-1] - tail(0.0)) - inner + tail(-k)
    return np.concatenate((left, x, right))


def filtfilt(filt: BiquadNotch, signal: Signal, tone_hz=None) -> Signal:
    """Forward-backward application: squared magnitude, zero phase.

    Both ends are extended (see :func:`extend`) and each pass starts in the
    steady state for its first sample.
    """
    x = signal.samples
    min_len = 6 * filt.order
    if x.size <= min_len:
        raise ParameterError(f"signal needs more than {min_len} samples, got {x.size}")
    b, a = np.asarray(filt.b), np.asarray(filt.a)
    npad = pad_length(filt, x.size)
    ext = extend(filt, x, npad, tone_hz)
    zi = lfilter_zi(b, a)
    y, _ = lfilter(b, a, ext, zi=zi * ext[0])
    y, _ = lfilter(b, a, y[::-1], zi=zi * y[-1])
    y = y[::-1]
    return signal.with_samples(y[npad:npad + x.size])


def filtfilt_cascade(filters, signal: Signal) -> Signal:
    """Each stage continues the tones of every stage across the edges."""
    filters = list(filters)
    centers = [f.center_hz for f in filters]
    out = signal
    for filt in filters:
        out = filtfilt(filt, out, centers)
    return out


def harmonic_notches(
    base_hz: float, n_harmonics: int, bandwidth_hz: float, fs: float
) -> list[BiquadNotch]:
    """One notch per harmonic ``h * base_hz`` for ``h = 1..n_harmonics``."""
    return [design_notch(h * base_hz, bandwidth_hz, fs) for h in range(1, n_harmonics + 1)]


def format_filter(filt: BiquadNotch) -> str:
    """Plain-text coefficient dump at 17 significant digits."""
    lines = [
        f"center_hz = {filt.center_hz:.17g}",
        f"bandwidth_hz = {filt.bandwidth_hz:.17g}",
        f"sample_rate = {filt.sample_rate:.17g}",
    ]
    lines += [f"b[{i}] = {v:.17g}" for i, v in enumerate(filt.b)]
    lines += [f"a[{i}] = {v:.17g}" for i, v in enumerate(filt.a)]
    lines += [f"|pole| = {m:.17g}" for m in np.abs(filt.poles)]
    half = filt.bandwidth_hz / 2
    probes = [0.0, filt.center_hz - half, filt.center_hz, filt.center_hz + half, filt.sample_rate / 2]
    for f, h in zip(probes, np.abs(frequency_response(filt, probes))):
        lines.append(f"|H({f:.17g} Hz)| = {h:.17g}")
    return "\n".join(lines)
