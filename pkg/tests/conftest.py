import math

import numpy as np
import pytest

from pv5.theta import Theta


@pytest.fixture(scope="session")
def panel():
    """Default parameter panel used across suites."""
    return {
        "theta": Theta.of(1 / 3, 1 / 5, 1 / 7),
        "sigma": 0.3 + 0.4j,
        "rho": 1.0 + 0j,
        "n_max": 12,
    }


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)


def random_theta(rng, scale=0.9):
    v = rng.uniform(-scale, scale, 6)
    return Theta.of(
        complex(v[0], v[1] / 4), complex(v[2], v[3] / 4), complex(v[4], v[5] / 4)
    )


def random_sigma(rng):
    return complex(rng.uniform(-0.8, 0.8), rng.uniform(0.15, 0.7) * rng.choice([-1, 1]))


def band_point(sigma, rho, band, lnr, shift=0.0):
    """Point with (Re s - shift) lnr - Im s arg + ln|rho| = band."""
    arg = ((sigma.real - shift) * lnr + math.log(abs(rho)) - band) / sigma.imag
    from pv5.cover import CoverPoint

    return CoverPoint(lnr, arg)
