import os
import tempfile

# the variable library is generated on import, keep it away from the user's home
os.environ["BMMPY_HOME"] = tempfile.mkdtemp(prefix="bmmpy-tests-")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from bmmpy import ProblemInstance  # noqa: E402


@pytest.fixture(autouse=True)
def _no_seed_environment(monkeypatch):
    monkeypatch.delenv("BMMP_SEED", raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_instance():
    return ProblemInstance.generate(m=32, n=64, k=6, seed=11)


@pytest.fixture
def noisy_instance():
    return ProblemInstance.generate(m=48, n=96, k=8, snr_db=30.0, seed=5)
