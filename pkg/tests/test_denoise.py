import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egmpli.bench import record_signals
from egmpli.config import BenchConfig
from egmpli.denoise import (
    DenoiseConfig,
    apply_thresholds,
    band_mask,
    denoise_notch,
    denoise_wavelet,
    estimate_pli,
    estimate_scale_powers,
    soft_threshold,
)
from egmpli.metrics import sci_time
from egmpli.signal import ParameterError, Signal, rms
from egmpli.synthesis import mix_at_sir
from egmpli.wavelet import coif2_filters

from .conftest import tone


def cascade_amplitude(freq, j, fs=1000.0):
    """Coefficient amplitude of a unit tone at detail scale j from the filter responses."""
    bank = coif2_filters()
    lp, hp = np.asarray(bank.analysis_lp), np.asarray(bank.analysis_hp)
    k = np.arange(lp.size)
    w = 2 * np.pi * freq / fs

    def resp(h, om):
        return np.sum(h * np.exp(-1j * om * k))

    c = np.prod([resp(lp, 2**i * w) for i in range(j - 1)]) * resp(hp, 2 ** (j - 1) * w)
    return abs(c)


@pytest.fixture(scope="module")
def clean_records():
    cfg = BenchConfig(n_records=10)
    return [record_signals(cfg, r) for r in range(10)]


class TestSoftThreshold:
    def test_hand_examples(self):
        np.testing.assert_array_equal(soft_threshold([3, -3, 1, -1], 2), [1, -1, 0, 0])
        np.testing.assert_array_equal(soft_threshold([0.5, -0.5], 1), [0, 0])

    def test_zero_threshold_is_identity(self, rng):
        w = rng.standard_normal(50)
        np.testing.assert_array_equal(soft_threshold(w, 0.0), w)

    def test_negative_threshold(self):
        with pytest.raises(ParameterError):
            soft_threshold([1.0], -0.1)

    @settings(max_examples=100, deadline=None)
    @given(w=st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50), lam=st.floats(0, 1e6))
    def test_property_shrinks_and_keeps_sign(self, w, lam):
        w = np.array(w)
        out = soft_threshold(w, lam)
        assert np.all(np.abs(out) <= np.abs(w))
        assert np.all(out * w >= 0)
        assert np.all(np.abs(np.abs(w) - np.abs(out) - np.minimum(np.abs(w), lam)) <= 1e-9 * (1 + np.abs(w)))


class TestEstimate:
    def test_recovers_pure_tone(self):
        x = tone(50.0)
        e = estimate_pli(x)
        assert rms(e - x) <= 1e-3 * rms(x)

    def test_zero(self):
        assert np.all(estimate_pli(Signal(np.zeros(2000))).samples == 0)

    def test_clean_record_leakage_frozen(self, clean_records):
        ratios = [rms(estimate_pli(c)) / rms(c) for c, _ in clean_records]
        assert max(ratios) == pytest.approx(0.20165, abs=5e-4)

    @pytest.mark.xfail(strict=True, reason="surrogate deflections carry more mains-band energy than 12%")
    def test_clean_record_leakage_below_12_percent(self, clean_records):
        assert all(rms(estimate_pli(c)) / rms(c) <= 0.12 for c, _ in clean_records)

    def test_band_mask(self):
        f = np.arange(0, 10, 0.5)
        m = band_mask(f, [2.0, 7.0], 0.5)
        np.testing.assert_array_equal(f[m], [1.5, 2.0, 2.5, 6.5, 7.0, 7.5])


class TestScalePowers:
    def test_zero_input(self):
        th = estimate_scale_powers(Signal(np.zeros(10000)))
        assert th.lambdas == (0.0,) * 5

    def test_unit_tone(self):
        th = estimate_scale_powers(tone(50.0))
        lam = np.array(th.lambdas)
        assert int(np.argmax(lam)) == 3
        assert lam[3] >= 10 * lam[0]
        assert lam[3] == pytest.approx(cascade_amplitude(50.0, 4), rel=0.02)
        np.testing.assert_allclose(
            lam, [0.0043567, 0.0876567, 1.2003125, 3.5664834, 0.1164176], rtol=1e-5
        )

    def test_construction_identity(self):
        cfg = DenoiseConfig(threshold_gain=1.7)
        th = estimate_scale_powers(tone(50.0), cfg)
        np.testing.assert_allclose(th.lambdas, 1.7 * np.sqrt(2 * np.array(th.source_power)), rtol=1e-15)

    def test_doubling_amplitude_doubles_thresholds(self):
        a = np.array(estimate_scale_powers(tone(50.0)).lambdas)
        b = np.array(estimate_scale_powers(tone(50.0, amp=2.0)).lambdas)
        np.testing.assert_allclose(b / a, 2.0, rtol=0.01)


class TestDenoiseWavelet:
    def test_pure_tone_suppressed(self):
        x = tone(50.0)
        assert rms(denoise_wavelet(x)) <= 0.05 * rms(x)

    def test_beats_notch_at_sir_10(self, clean_records):
        for clean, pli in clean_records[:5]:
            noisy, _ = mix_at_sir(clean, pli, 10.0)
            w = sci_time(clean, denoise_wavelet(noisy)).match_percent
            n = sci_time(clean, denoise_notch(noisy)).match_percent
            assert w > n

    def test_clean_input_frozen(self, clean_records):
        scores = [sci_time(c, denoise_wavelet(c)).match_percent for c, _ in clean_records]
        assert np.mean(scores) == pytest.approx(68.398, abs=0.01)

    @pytest.mark.xfail(strict=True, reason="thresholds from the surrogate's own mains-band energy are not near zero")
    def test_clean_input_near_identity(self, clean_records):
        for c, _ in clean_records:
            assert sci_time(c, denoise_wavelet(c)).match_percent >= 99.0

    def test_zero_thresholds_reconstruct(self, rng):
        x = Signal(rng.standard_normal(3000))
        th = estimate_scale_powers(Signal(np.zeros(3000)))
        np.testing.assert_allclose(apply_thresholds(x, th).samples, x.samples, atol=1e-10)

    def test_threshold_approximation_switch(self):
        x = Signal(tone(50.0).samples + 3.0)
        plain = denoise_wavelet(x)
        shrunk = denoise_wavelet(x, DenoiseConfig(threshold_approximation=True))
        assert abs(np.mean(shrunk.samples)) < abs(np.mean(plain.samples))

    def test_too_short(self):
        with pytest.raises(ParameterError):
            denoise_wavelet(Signal(np.ones(20)))


class TestDenoiseNotch:
    def test_pure_tone(self):
        x = tone(50.0)
        assert rms(denoise_notch(x)) <= 1e-3 * rms(x)

    def test_low_tone_passes(self):
        x = tone(10.0)
        assert rms(denoise_notch(x) - x) <= 1e-3 * rms(x)

    def test_zero(self):
        assert np.all(denoise_notch(Signal(np.zeros(500))).samples == 0)

    def test_single_notch_mode(self):
        x = tone(100.0)
        kept = denoise_notch(x, DenoiseConfig(reference_harmonics=False))
        assert rms(kept - x) <= 5e-3 * rms(x)
        assert rms(denoise_notch(x)) <= 1e-3

    def test_clean_input_frozen(self, clean_records):
        scores = [sci_time(c, denoise_notch(c)).match_percent for c, _ in clean_records]
        assert np.mean(scores) == pytest.approx(22.724, abs=0.01)


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(levels=0), dict(levels=9), dict(notch_bw_hz=0), dict(threshold_gain=-1), dict(n_harmonics=0), dict(wavelet_family="haar2")],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            DenoiseConfig(**kwargs)

    def test_harmonics_above_nyquist_dropped(self):
        notches = DenoiseConfig(n_harmonics=5).notches(500.0, True)
        assert [n.center_hz for n in notches] == [50.0, 100.0, 150.0, 200.0]
