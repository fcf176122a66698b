import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import helpers  # noqa: E402
from aolearn import cg, oblique, objective, patches  # noqa: E402


@pytest.fixture(scope="session")
def training_images():
    return [helpers.synthetic_image(s, 96, 96) for s in (1, 2, 3)]


@pytest.fixture(scope="session")
def small_operator(training_images):
    """A quickly learned 32 x 16 operator on 4 x 4 patches, shared by the
    reconstruction and CLI tests (learning it once keeps the suite fast)."""
    S = patches.extract_training_set(training_images, 4, 3000, seed=0)
    res = cg.learn_operator(S, objective.LearnParams(),
                            cg.SolverConfig(max_iters=150),
                            oblique.random_point(16, 32, seed=0))
    assert np.isfinite(res.f)
    return res.operator
