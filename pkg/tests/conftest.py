import numpy as np
import pytest

from egmpli import BenchConfig, Signal

FS = 1000.0


def tone(freq, duration=10.0, fs=FS, amp=1.0, phase=0.0):
    t = np.arange(int(round(duration * fs))) / fs
    return Signal(amp * np.sin(2 * np.pi * freq * t + phase), fs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_cfg():
    return BenchConfig(n_records=6)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
