import numpy as np
import pytest

from competing_chain import ModelParams


@pytest.fixture(scope="session")
def params_small():
    """Generic admissible parameters at the smallest bulk size."""
    return ModelParams(two_n=4, a_bar=0.6, p=1.0, q=0.5, xi=1.2)


@pytest.fixture(scope="session")
def params_fig4():
    """Chain at the reference point a=0.66i, p=1.2, q-bar=0.7, xi=1.2."""
    return ModelParams.from_q_bar(8, 0.66, 1.2, 0.7, 1.2)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240810)


# one representative parameter point per ground-state regime at 2N=8;
# chosen deep enough in each box that the asymptotic inventory is already
# realized at this size (boundary pairs separate, no hybridized quadruples)
REGIME_POINTS = {
    "I": (0.1, 0.35),
    "II": (0.05, -0.25),
    "III": (1.2, 0.3),
    "IV": (1.2, -0.3),
    "V": (1.2, 0.7),
    "VI": (1.2, -0.7),
}


@pytest.fixture(scope="session")
def regime_points():
    return dict(REGIME_POINTS)
