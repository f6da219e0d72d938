import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from elastodec.ball_solver import BallScatterer, solve_ball  # noqa: E402
from elastodec.harmonics import as_unit  # noqa: E402
from elastodec.wavefuncs import IncidentWave, WaveParams  # noqa: E402

D_GENERIC = as_unit([0.3, -0.5, 0.8])
DPERP_GENERIC = as_unit(np.cross(D_GENERIC, [1.0, 0.2, 0.0]))


@pytest.fixture(scope="session")
def params():
    return WaveParams(lam=2.0, mu=1.0, omega=1.0)


@pytest.fixture(scope="session")
def incident():
    return IncidentWave(D_GENERIC, DPERP_GENERIC, alpha_p=1.0, alpha_s=1.0)


@pytest.fixture(scope="session")
def sol_iv(params, incident):
    return solve_ball(params, incident, BallScatterer(1.0, "IV"), 30)


@pytest.fixture(scope="session")
def sol_iii(params, incident):
    return solve_ball(params, incident, BallScatterer(1.0, "III"), 30)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def exterior_points(rng, n, rmin=1.2, rmax=4.0):
    dirs = as_unit(rng.normal(size=(n, 3)))
    return dirs * rng.uniform(rmin, rmax, size=(n, 1))
