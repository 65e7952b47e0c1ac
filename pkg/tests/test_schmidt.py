import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from twinbeam.errors import ConfigError, NumericalError
from twinbeam.schmidt import (
    decompose,
    gain_for_k,
    high_gain_populations,
    k_high_gain,
    mode_time_profile,
    schmidt_number,
    truncate,
)

spectra = arrays(float, st.integers(2, 12), elements=st.floats(1e-3, 1.0)).map(lambda a: a / a.sum())


def test_default_source_schmidt_numbers(default_spectrum):
    assert default_spectrum.K == pytest.approx(1.7494, abs=1e-4)
    pop = high_gain_populations(default_spectrum.eigenvalues, 10.0)
    assert k_high_gain(pop) == pytest.approx(1.000168, abs=1e-6)


def test_decomposition_reconstructs(default_jsa, default_spectrum):
    assert np.allclose(default_spectrum.reconstruct(), default_jsa.values, atol=1e-12)
    lam = default_spectrum.eigenvalues
    assert lam.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(lam) <= 0)
    for modes in (default_spectrum.signal_modes, default_spectrum.idler_modes):
        gram = modes[:, :20].conj().T @ modes[:, :20]
        assert np.allclose(gram, np.eye(20), atol=1e-12)


def test_signal_mode_phase_convention(default_spectrum):
    for col in default_spectrum.signal_modes[:, :5].T:
        pivot = col[np.argmax(np.abs(col))]
        assert pivot.imag == pytest.approx(0, abs=1e-14) and pivot.real > 0


def test_decompose_rejects_bad_input():
    with pytest.raises(ConfigError):
        decompose(np.ones(5))
    with pytest.raises(NumericalError):
        decompose(np.zeros((4, 4)))


def test_product_state_has_unit_k():
    a = np.exp(-np.linspace(-3, 3, 80) ** 2)
    assert decompose(np.outer(a, a * 1j)).K == pytest.approx(1.0, abs=1e-12)


def test_schmidt_number_oracle():
    assert schmidt_number([0.7, 0.2, 0.1]) == pytest.approx(1 / (0.49 + 0.04 + 0.01), rel=1e-14)
    assert schmidt_number([0.7, 0.2, 0.1]) == pytest.approx(1.85185, abs=1e-5)
    assert schmidt_number([7, 2, 1]) == pytest.approx(schmidt_number([0.7, 0.2, 0.1]))
    with pytest.raises(ConfigError):
        schmidt_number([])


def test_high_gain_oracle_at_g3():
    pop = high_gain_populations([0.7, 0.2, 0.1], 3.0)
    assert pop.photons == pytest.approx([math.sinh(3 * math.sqrt(x)) ** 2 for x in (0.7, 0.2, 0.1)], rel=1e-13)
    assert pop.photons == pytest.approx([37.353, 3.1751, 1.2046], abs=1e-3)
    assert pop.weights[0] == pytest.approx(0.89505, abs=1e-5)
    assert k_high_gain(pop) == pytest.approx(1.2380, abs=1e-4)


def test_zero_gain_and_overflow():
    with pytest.raises(NumericalError, match="zero-gain"):
        high_gain_populations([1.0], 0.0)
    with pytest.raises(NumericalError, match="overflow"):
        with np.errstate(over="ignore"):
            high_gain_populations([0.5, 0.5], 2000.0)


def test_truncation_threshold():
    assert truncate([1.0, 1e-11, 1e-13]).tolist() == [1.0, 1e-11]


@settings(max_examples=100, deadline=None)
@given(spectra)
def test_gain_narrowing_is_monotone(lam):
    gains = np.linspace(0.05, 12, 40)
    k = [k_high_gain(high_gain_populations(lam, g)) for g in gains]
    assert np.all(np.diff(k) <= 1e-9 * np.array(k[:-1]))
    assert k[0] == pytest.approx(schmidt_number(lam), rel=5e-3)


def test_gain_for_k_round_trip(default_spectrum):
    g = gain_for_k(default_spectrum.eigenvalues, 1.1)
    assert k_high_gain(high_gain_populations(default_spectrum.eigenvalues, g)) == pytest.approx(1.1, abs=1e-9)
    with pytest.raises(NumericalError):
        gain_for_k(default_spectrum.eigenvalues, 5.0)


def test_time_profile_gaussian_and_shift():
    n = 512
    w = np.linspace(-1.0, 1.0, n, endpoint=False)
    s = 0.1
    mode = np.exp(-(w**2) / (2 * s**2))
    mode /= np.linalg.norm(mode)
    t, field = mode_time_profile(mode, w)
    assert np.linalg.norm(field) == pytest.approx(1.0, abs=1e-12)
    # a Gaussian of spectral width s has temporal width 1/s
    assert np.sum(t**2 * np.abs(field) ** 2) == pytest.approx(1 / (2 * s**2), rel=1e-6)
    t0 = 40.0
    _, delayed = mode_time_profile(mode * np.exp(1j * w * t0), w)
    assert np.sum(t * np.abs(delayed) ** 2) == pytest.approx(t0, abs=0.2)
    with pytest.raises(ConfigError, match="uniform"):
        mode_time_profile(mode, w**3)
