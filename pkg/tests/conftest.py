import numpy as np
import pytest

from twinbeam.dispersion import CrystalConfig
from twinbeam.jsa import FrequencyGrid, JsaMatrix, build_jsa, default_grid
from twinbeam.pump import PumpConfig
from twinbeam.schmidt import decompose


def double_gaussian(ratio, n=401, half=8.0):
    """Amplitude exp(−u²/2a² − v²/2b²) along the diagonals, with a/b = ratio.

    Its Schmidt number is (ratio + 1/ratio)/2.
    """
    x = np.linspace(-half, half, n)
    xs, xi = np.meshgrid(x, x, indexing="ij")
    u, v = (xs + xi) / np.sqrt(2), (xs - xi) / np.sqrt(2)
    a = np.sqrt(ratio)
    b = 1 / np.sqrt(ratio)
    values = np.exp(-(u**2) / (2 * a**2) - v**2 / (2 * b**2)).astype(complex)
    return JsaMatrix(values / np.linalg.norm(values), FrequencyGrid(x, x.copy()))


@pytest.fixture(scope="session")
def default_crystal():
    return CrystalConfig()


@pytest.fixture(scope="session")
def default_pump():
    return PumpConfig()


@pytest.fixture(scope="session")
def default_jsa(default_crystal, default_pump):
    grid = default_grid(default_crystal, default_pump, 512)
    return build_jsa(default_crystal, default_pump, grid)


@pytest.fixture(scope="session")
def default_spectrum(default_jsa):
    return decompose(default_jsa)
