import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.signal import iirnotch

from egmpli.notch import (
    design_notch,
    extend,
    filtfilt,
    filtfilt_cascade,
    format_filter,
    frequency_response,
    harmonic_notches,
    pad_length,
)
from egmpli.signal import ParameterError, Signal

from .conftest import tone

# Frozen coefficients of the (50 Hz, 2 Hz, 1000 Hz) design.
B_50 = (0.9937559649536571, -1.890236172152708, 0.9937559649536571)
A_50 = (1.0, -1.890236172152708, 0.9875119299073144)


@pytest.fixture(scope="module")
def notch50():
    return design_notch(50.0, 2.0, 1000.0)


def direct_form(b, a, x):
    """Plain difference-equation loop, zero initial state."""
    y = [0.0] * len(x)
    for n in range(len(x)):
        acc = 0.0
        for k in range(3):
            if n - k >= 0:
                acc += b[k] * x[n - k]
                if k:
                    acc -= a[k] * y[n - k]
        y[n] = acc
    return np.array(y)


class TestDesign:
    def test_frozen_coefficients(self, notch50):
        np.testing.assert_allclose(notch50.b, B_50, rtol=0, atol=1e-15)
        np.testing.assert_allclose(notch50.a, A_50, rtol=0, atol=1e-15)

    @pytest.mark.parametrize("f0,bw,fs", [(50, 2, 1000), (60, 1, 500), (100, 4, 1000), (150, 2, 1000), (400, 10, 1000)])
    def test_matches_independent_design(self, f0, bw, fs):
        b, a = iirnotch(f0, f0 / bw, fs)
        filt = design_notch(f0, bw, fs)
        np.testing.assert_allclose(filt.b, b, atol=1e-14)
        np.testing.assert_allclose(filt.a, a, atol=1e-14)

    def test_null_and_passband(self, notch50):
        h = np.abs(frequency_response(notch50, [0.0, 50.0, 499.0]))
        assert h[1] <= 1e-6
        assert h[0] >= 0.999 and h[2] >= 0.999

    def test_band_edges(self, notch50):
        h = np.abs(frequency_response(notch50, [49.0, 51.0]))
        np.testing.assert_allclose(h, 1 / math.sqrt(2), rtol=0.005)

    def test_dc_is_unity(self, notch50):
        h = frequency_response(notch50, 0.0)[0]
        assert h == pytest.approx(1.0 + 0j, abs=1e-12)

    def test_no_gain_above_unity(self, notch50):
        f = np.linspace(0, 500, 20001)
        assert np.abs(frequency_response(notch50, f)).max() <= 1 + 1e-9

    def test_stable(self, notch50):
        assert np.all(np.abs(notch50.poles) < 1)
        assert notch50.settle_samples() == 3299

    @pytest.mark.parametrize("args", [(0, 2, 1000), (500, 2, 1000), (50, 0, 1000), (50, 100, 1000), (499, 4, 1000)])
    def test_invalid(self, args):
        with pytest.raises(ParameterError):
            design_notch(*args)

    def test_response_outside_range(self, notch50):
        with pytest.raises(ParameterError):
            frequency_response(notch50, [600.0])

    @settings(max_examples=60, deadline=None)
    @given(
        f0=st.floats(5, 450),
        frac=st.floats(0.01, 0.9),
    )
    def test_property_edges_and_null(self, f0, frac):
        bw = frac * 2 * min(f0, 500 - f0)
        filt = design_notch(f0, bw, 1000.0)
        lo = max(f0 - bw / 2, 0.0)
        # the exact edges sit at the prewarped frequencies, so check the null,
        # the DC gain and that the magnitude at the true edges is 1/sqrt(2)
        w0 = 2 * np.pi * f0 / 1000
        bwr = 2 * np.pi * bw / 1000
        t = np.tan(bwr / 2)
        c = np.cos(w0)
        # cos of the edges: solve for where |H|^2 = 1/2
        assert abs(frequency_response(filt, f0)[0]) < 1e-6
        assert abs(frequency_response(filt, 0.0)[0]) == pytest.approx(1.0, abs=1e-9)
        assert np.all(np.abs(filt.poles) < 1)
        assert lo >= 0 and t > 0 and abs(c) <= 1

    def test_format_has_17_digits(self, notch50):
        text = format_filter(notch50)
        assert "b[1] = -1.8902361721527079" in text
        assert "|H(50 Hz)|" in text


class TestFiltfilt:
    def test_removes_on_bin_tone(self, notch50):
        x = tone(50.0)
        y = filtfilt(notch50, x)
        assert np.sqrt(np.mean(y.samples**2)) <= 1e-3 * np.sqrt(np.mean(x.samples**2))

    @pytest.mark.parametrize("phase", [0.0, 0.7, 2.0])
    def test_passes_low_tone_with_zero_delay(self, notch50, phase):
        x = tone(10.0, phase=phase)
        y = filtfilt(notch50, x)
        err = np.sqrt(np.mean((y.samples - x.samples) ** 2))
        assert err <= 1e-3 * np.sqrt(np.mean(x.samples**2))
        xc = np.correlate(y.samples, x.samples, mode="full")
        assert int(np.argmax(xc)) - (len(x) - 1) == 0

    def test_zero_in_zero_out(self, notch50):
        y = filtfilt(notch50, Signal(np.zeros(1000)))
        assert np.all(y.samples == 0)

    def test_too_short(self, notch50):
        with pytest.raises(ParameterError):
            filtfilt(notch50, Signal(np.ones(12)))

    def test_short_signal_caps_padding(self, notch50, rng):
        x = Signal(rng.standard_normal(50))
        assert pad_length(notch50, 50) == 49
        assert len(filtfilt(notch50, x)) == 50

    def test_matches_direct_form_oracle(self, notch50, rng):
        """Forward and backward difference-equation loops over the same
        extension, started from the steady state of the first sample, give
        the same samples."""
        x = rng.standard_normal(400)
        npad = pad_length(notch50, x.size)
        ext = extend(notch50, x, npad)
        b, a = notch50.b, notch50.a
        # steady state for a constant input equals subtracting it first
        c0 = ext[0]
        fwd = direct_form(b, a, list(ext - c0)) + c0
        c1 = fwd[-1]
        bwd = direct_form(b, a, list(fwd[::-1] - c1)) + c1
        expected = bwd[::-1][npad:npad + x.size]
        got = filtfilt(notch50, Signal(x)).samples
        np.testing.assert_allclose(got, expected, atol=1e-10)

    def test_linearity(self, notch50, rng):
        a, b = rng.standard_normal(2000), rng.standard_normal(2000)
        ya = filtfilt(notch50, Signal(a)).samples
        yb = filtfilt(notch50, Signal(b)).samples
        yab = filtfilt(notch50, Signal(2 * a - b)).samples
        np.testing.assert_allclose(yab, 2 * ya - yb, atol=1e-10)

    def test_time_reversal_symmetry(self, notch50, rng):
        x = rng.standard_normal(3000)
        y = filtfilt(notch50, Signal(x)).samples
        yr = filtfilt(notch50, Signal(x[::-1])).samples[::-1]
        np.testing.assert_allclose(y, yr, atol=1e-10)

    def test_cascade_removes_harmonics(self):
        filters = harmonic_notches(50.0, 3, 2.0, 1000.0)
        assert [f.center_hz for f in filters] == [50.0, 100.0, 150.0]
        x = Signal(tone(50).samples + 0.4 * tone(100).samples + 0.2 * tone(150).samples)
        y = filtfilt_cascade(filters, x)
        assert np.sqrt(np.mean(y.samples**2)) < 1e-3
