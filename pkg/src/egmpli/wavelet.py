"""Decimating two-channel filter bank DWT/IDWT with Coiflet-2 filters."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .signal import ParameterError, Signal, StructuralError

BOUNDARY_MODES = ("symmetric", "periodization")
MAX_LEVELS = 8

# Coiflet order 2 scaling filter (decomposition low-pass), Daubechies (1992)
# table normalised to sum sqrt(2). Checked by QuadFilterBank.verify().
_COIF2_LOWPASS = (
    -0.0007205494453645122,
    -0.0018232088707029932,
    0.0056114348193944995,
    0.023680171946334084,
    -0.0594344186464569,
    -0.0764885990783064,
    0.41700518442169254,
    0.8127236354455423,
    0.3861100668211622,
    -0.06737255472196302,
    -0.04146493678175915,
    0.016387336463522112,
)


def _tap_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class QuadFilterBank:
    """Orthogonal analysis/synthesis low-pass and high-pass taps."""

    analysis_lp: tuple[float, ...]
    analysis_hp: tuple[float, ...]
    synthesis_lp: tuple[float, ...]
    synthesis_hp: tuple[float, ...]
    family_name: str
    vanishing_moments: int = 0

    @classmethod
    def from_lowpass(cls, lowpass, family_name: str, vanishing_moments: int = 0) -> "QuadFilterBank":
        """Build the bank from the analysis low-pass by the quadrature mirror rule.

        ``hp[k] = (-1)**(k+1) * lp[L-1-k]``; synthesis taps are the time
        reverses of the analysis taps.
        """
        lp = np.asarray(lowpass, dtype=float)
        k = np.arange(lp.size)
        hp = (-1.0) ** (k + 1) * lp[::-1]
        return cls(
            _tap_tuple(lp),
            _tap_tuple(hp),
            _tap_tuple(lp[::-1]),
            _tap_tuple(hp[::-1]),
            family_name,
            vanishing_moments,
        )

    @property
    def length(self) -> int:
        return len(self.analysis_lp)

    def verify(self) -> dict[str, float]:
        """Check the bank's defining identities.

        Returns the worst deviation per check; raises ``StructuralError`` if
        any exceeds its tolerance.
        """
        lp = np.asarray(self.analysis_lp)
        hp = np.asarray(self.analysis_hp)
        n = lp.size
        k = np.arange(n)
        checks: dict[str, tuple[float, float]] = {}
        checks["lowpass_sum"] = (abs(lp.sum() - np.sqrt(2)), 1e-12)
        checks["highpass_sum"] = (abs(hp.sum()), 1e-12)
        ortho = [np.dot(lp[: n - 2 * m], lp[2 * m:]) - (m == 0) for m in range(n // 2)]
        checks["double_shift_orthogonality"] = (float(np.max(np.abs(ortho))), 1e-10)
        qmf = hp - (-1.0) ** (k + 1) * lp[::-1]
        synth = np.concatenate(
            (np.asarray(self.synthesis_lp) - lp[::-1], np.asarray(self.synthesis_hp) - hp[::-1])
        )
        checks["quadrature_mirror"] = (float(np.max(np.abs(np.concatenate((qmf, synth))))), 0.0)
        if self.vanishing_moments:
            moments = [np.sum(k.astype(float) ** p * hp) for p in range(self.vanishing_moments)]
            checks["vanishing_moments"] = (float(np.max(np.abs(moments))), 1e-8)
        failed = {name: v for name, (v, tol) in checks.items() if v > tol}
        if failed:
            raise StructuralError(f"{self.family_name} filter bank failed checks: {failed}")
        return {name: v for name, (v, _) in checks.items()}


def _coiflet_residuals(h: np.ndarray, moments: int, center: float) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the coiflet equations and their Jacobian."""
    n = h.size
    k = np.arange(n, dtype=float)
    rows, jac = [], []
    for m in range(n // 2):
        rows.append(np.dot(h[: n - 2 * m], h[2 * m:]) - (m == 0))
        g = np.zeros(n)
        g[: n - 2 * m] += h[2 * m:]
        g[2 * m:] += h[: n - 2 * m]
        jac.append(g)
    linear = [np.ones(n)]
    targets = [np.sqrt(2)]
    alt = (-1.0) ** k
    for p in range(moments):
        linear.append(alt * (n - 1 - k) ** p)  # high-pass moments
        targets.append(0.0)
    for p in range(1, moments):
        linear.append((k - center) ** p)  # scaling-function moments
        targets.append(0.0)
    for row, t in zip(linear, targets):
        rows.append(np.dot(row, h) - t)
        jac.append(row)
    return np.array(rows), np.array(jac)


def _polish(lowpass, moments: int, steps: int = 4) -> np.ndarray:
    """Refine tabulated coiflet taps to double precision by Gauss-Newton."""
    h = np.array(lowpass, dtype=float)
    center = round(float(np.dot(np.arange(h.size), h)) / np.sqrt(2))
    for _ in range(steps):
        res, jac = _coiflet_residuals(h, moments, center)
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        h = h + step
    return h


@lru_cache(maxsize=None)
def coif2_filters() -> QuadFilterBank:
    """12-tap Coiflet-2 bank, verified on construction."""
    taps = _polish(_COIF2_LOWPASS, moments=4)
    bank = QuadFilterBank.from_lowpass(taps, "coif2", vanishing_moments=4)
    bank.verify()
    return bank


WAVELETS = {"coif2": coif2_filters}


def get_bank(name: str) -> QuadFilterBank:
    try:
        return WAVELETS[name.lower()]()
    except KeyError:
        raise ParameterError(f"unknown wavelet {name!r}; known: {sorted(WAVELETS)}") from None


@dataclass(frozen=True)
class WaveletDecomposition:
    """Detail vectors ``details[0]`` (finest, scale 1) .. ``details[J-1]`` and
    the level-J approximation.

    ``lengths[j]`` is the length of the approximation input to level ``j+1``
    (``lengths[0]`` is the original signal length), which pins the inverse
    for any input length.
    """

    details: tuple[np.ndarray, ...]
    approximation: np.ndarray
    lengths: tuple[int, ...]
    sample_rate: float
    boundary_mode: str = "symmetric"
    family_name: str = "coif2"

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def original_length(self) -> int:
        return self.lengths[0]

    def energies(self) -> tuple[list[float], float]:
        """Sum of squares per detail scale and for the approximation."""
        return [float(np.dot(d, d)) for d in self.details], float(np.dot(self.approximation, self.approximation))

    def with_details(self, details) -> "WaveletDecomposition":
        return replace(self, details=tuple(np.asarray(d, dtype=float) for d in details))

    def with_approximation(self, approximation) -> "WaveletDecomposition":
        return replace(self, approximation=np.asarray(approximation, dtype=float))


def coeff_length(n: int, taps: int, mode: str = "symmetric") -> int:
    """Coefficients produced from ``n`` samples by one analysis stage."""
    if mode == "periodization":
        return n // 2
    return (n + taps) // 2  # ceil((n + taps - 1) / 2)


def _symmetric_index(idx: np.ndarray, n: int) -> np.ndarray:
    """Map indices onto ``[0, n)`` by half-sample symmetric reflection."""
    period = 2 * n
    idx = np.mod(idx, period)
    return np.where(idx < n, idx, period - 1 - idx)


def _analysis_index(n: int, taps: int, mode: str) -> np.ndarray:
    # coefficient o is sum_j h[j] * x[2o + 1 - j]
    n_out = coeff_length(n, taps, mode)
    raw = 2 * np.arange(n_out)[:, None] + 1 - np.arange(taps)[None, :]
    if mode == "periodization":
        return np.mod(raw, n)
    return _symmetric_index(raw, n)


def _analysis_step(x: np.ndarray, bank: QuadFilterBank, mode: str) -> tuple[np.ndarray, np.ndarray]:
    gathered = x[_analysis_index(x.size, bank.length, mode)]
    return gathered @ np.asarray(bank.analysis_lp), gathered @ np.asarray(bank.analysis_hp)


def _synthesis_step(
    approx: np.ndarray, detail: np.ndarray, bank: QuadFilterBank, n: int, mode: str
) -> np.ndarray:
    taps = bank.length
    n_out = approx.size
    raw = 2 * np.arange(n_out)[:, None] + 1 - np.arange(taps)[None, :]
    # synthesis taps are the reversed analysis taps, so scatter back through
    # the same index pattern with the analysis taps
    contrib = (
        approx[:, None] * np.asarray(bank.synthesis_lp)[::-1][None, :]
        + detail[:, None] * np.asarray(bank.synthesis_hp)[::-1][None, :]
    )
    if mode == "periodization":
        out = np.zeros(n)
        np.add.at(out, np.mod(raw, n).ravel(), contrib.ravel())
        return out
    # every coefficient whose window touches [0, n) is present, so the
    # unextended positions are reconstructed exactly
    offset = taps - 1
    buf = np.zeros(2 * n_out + taps)
    np.add.at(buf, (raw + offset).ravel(), contrib.ravel())
    return buf[offset:offset + n]


def dwt(signal: Signal, bank: QuadFilterBank, levels: int = 5, mode: str = "symmetric") -> WaveletDecomposition:
    """Multilevel analysis: cascaded filter and downsample by two."""
    if mode not in BOUNDARY_MODES:
        raise ParameterError(f"unknown boundary mode {mode!r}")
    if not 1 <= levels <= MAX_LEVELS:
        raise ParameterError(f"levels must be in 1..{MAX_LEVELS}, got {levels}")
    n = len(signal)
    if n < 2**levels:
        raise ParameterError(f"{n} samples too few for {levels} levels")
    if mode == "periodization" and n % 2**levels:
        raise ParameterError(f"periodization needs a length divisible by {2**levels}")

    approx = signal.samples.astype(float)
    details, lengths = [], []
    for _ in range(levels):
        lengths.append(approx.size)
        approx, detail = _analysis_step(approx, bank, mode)
        details.append(detail)
    return WaveletDecomposition(
        tuple(details), approx, tuple(lengths), signal.sample_rate, mode, bank.family_name
    )


def idwt(decomp: WaveletDecomposition, bank: QuadFilterBank) -> Signal:
    """Multilevel synthesis, trimmed back to the stored lengths."""
    if decomp.boundary_mode not in BOUNDARY_MODES:
        raise StructuralError(f"unknown boundary mode {decomp.boundary_mode!r}")
    if len(decomp.lengths) != decomp.levels or decomp.levels == 0:
        raise StructuralError("lengths and details disagree on the number of levels")
    approx = np.asarray(decomp.approximation, dtype=float)
    for level in range(decomp.levels - 1, -1, -1):
        n = decomp.lengths[level]
        expected = coeff_length(n, bank.length, decomp.boundary_mode)
        detail = np.asarray(decomp.details[level], dtype=float)
        if approx.size != expected or detail.size != expected:
            raise StructuralError(
                f"level {level + 1}: expected {expected} coefficients, "
                f"got approximation {approx.size} and detail {detail.size}"
            )
        approx = _synthesis_step(approx, detail, bank, n, decomp.boundary_mode)
    return Signal(approx, decomp.sample_rate)


def scale_band(j: int, fs: float) -> tuple[float, float]:
    """Nominal detail band of scale ``j``: ``(fs / 2**(j+1), fs / 2**j)``."""
    if j < 1:
        raise ParameterError("scale must be >= 1")
    return fs / 2 ** (j + 1), fs / 2**j


def alias_through_cascade(freq_hz: float, j: int, fs: float) -> float:
    """Frequency at which a tone at ``freq_hz`` appears in scale-``j`` coefficients.

    Each stage halves the rate and folds everything above the new Nyquist
    back into ``[0, rate/2]``.
    """
    f = float(freq_hz)
    rate = float(fs)
    for _ in range(j):
        rate /= 2
        f = np.mod(f, rate)
        if f > rate / 2:
            f = rate - f
    return float(f)


def format_bank(bank: QuadFilterBank) -> str:
    """Plain-text tap dump plus the verification results."""
    lines = [f"family = {bank.family_name}", f"taps = {bank.length}"]
    for name in ("analysis_lp", "analysis_hp", "synthesis_lp", "synthesis_hp"):
        taps = getattr(bank, name)
        lines.append(f"{name} = " + ", ".join(f"{t:.17g}" for t in taps))
    for check, value in bank.verify().items():
        lines.append(f"check {check}: max deviation {value:.3e} ok")
    return "\n".join(lines)
