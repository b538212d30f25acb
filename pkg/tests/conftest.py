import numpy as np
import pytest

from riscov.analytic import SystemParams
from riscov.fading import dbm_to_watts


@pytest.fixture(scope="session")
def base_params() -> SystemParams:
    """Baseline scenario: 20 m serving link, 3 m offset, -30 dB gains."""
    return SystemParams.default()


@pytest.fixture(scope="session")
def fig4_params():
    """Fixed association with surface at -24 dBm transmit power."""
    def make(lambda_t: float) -> SystemParams:
        return SystemParams.default(lambda_t=lambda_t, p_tx_w=dbm_to_watts(-24.0))
    return make


def pytest_configure(config):
    np.seterr(over="ignore", under="ignore")
