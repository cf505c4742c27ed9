import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egmpli.metrics import SciConfig, SciResult, sci, sci_freq, sci_time
from egmpli.signal import ParameterError, Signal

from .conftest import tone


def brute_force_sci(reference, test, xi_fraction=0.05):
    """Per-sample loop over the definition."""
    n = len(reference)
    mean = sum(reference) / n
    sd = (sum((r - mean) ** 2 for r in reference) / n) ** 0.5
    xi = xi_fraction * sd
    scores = [1 if abs(r - t) <= xi else -1 for r, t in zip(reference, test)]
    return sum(scores) / n


class TestSci:
    def test_identity(self):
        s = Signal(np.random.default_rng(1).standard_normal(100))
        res = sci_time(s, s)
        assert res.raw == 1.0 and res.match_percent == 100.0

    def test_offset_fails_everywhere(self):
        x = np.random.default_rng(2).standard_normal(100)
        res = sci(x, x + 10 * np.std(x))
        assert res.raw == -1.0 and res.match_percent == 0.0

    def test_hand_example(self):
        res = sci([0, 1, 0, -1], [0, 1.1, 0, -1])
        assert res.xi_used == pytest.approx(0.05 * np.sqrt(0.5))
        assert res.raw == 0.5
        assert res.match_percent == 75.0

    def test_reference_sets_threshold(self):
        a = np.array([0.0, 1.0, 0.0, -1.0])
        b = 10 * a
        assert sci(a, b).xi_used != sci(b, a).xi_used

    def test_errors(self):
        with pytest.raises(ParameterError):
            sci([1, 2, 3], [1, 2])
        with pytest.raises(ParameterError):
            sci([1, 1, 1], [1, 2, 3])
        with pytest.raises(ParameterError):
            SciConfig(xi_fraction=0)
        with pytest.raises(ParameterError):
            SciConfig(report_mode="ratio")
        with pytest.raises(ParameterError):
            sci_time(Signal([1.0, 2.0]), Signal([1.0, 2.0], 5))

    def test_oracle_on_random_pairs(self):
        rng = np.random.default_rng(77)
        for _ in range(200):
            n = int(rng.integers(2, 60))
            ref = rng.standard_normal(n)
            test = ref + rng.normal(0, rng.uniform(0, 0.2), n)
            assert sci_time(Signal(ref), Signal(test)).raw == brute_force_sci(list(ref), list(test))

    @settings(max_examples=100, deadline=None)
    @given(
        ref=st.lists(st.floats(-100, 100), min_size=2, max_size=40).filter(lambda v: np.std(v) > 1e-6),
        noise=st.floats(0, 1),
        seed=st.integers(0, 10_000),
    )
    def test_property_bounds_and_oracle(self, ref, noise, seed):
        ref = np.array(ref)
        test = ref + np.random.default_rng(seed).normal(0, noise * np.std(ref), ref.size)
        res = sci(ref, test)
        assert -1 <= res.raw <= 1
        assert 0 <= res.match_percent <= 100
        assert res.raw == brute_force_sci(list(ref), list(test))

    def test_as_dict(self):
        d = SciResult(0.5, 0.1, 4).as_dict("time")
        assert d == {"raw": 0.5, "match_percent": 75.0, "domain": "time", "xi_used": 0.1, "n_samples": 4}
        assert SciResult(0.5, 0.1, 4).value("raw") == 0.5


class TestSciFreq:
    def test_identity(self):
        s = tone(30.0)
        assert sci_freq(s, s).match_percent == 100.0

    def test_shift_invariant(self):
        x = Signal(np.random.default_rng(3).standard_normal(10000))
        shifted = x.with_samples(np.roll(x.samples, 100))
        assert sci_freq(x, shifted).match_percent == pytest.approx(100.0, abs=100 / 5001)

    def test_swapped_tone(self):
        a, b = tone(50.0), tone(60.0)
        res = sci_freq(a, b)
        assert res.n_samples == 5001
        # only the two peak bins differ by more than the threshold
        assert res.raw == pytest.approx((5001 - 2 * 2) / 5001)
        from egmpli.signal import amplitude_spectrum

        ra = amplitude_spectrum(a).magnitudes
        rb = amplitude_spectrum(b).magnitudes
        assert res.raw == brute_force_sci(list(ra), list(rb))
