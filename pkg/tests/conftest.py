import os

import numpy as np
import pytest
from hypothesis import settings

SEED = int(os.environ.get("POINTSCATTER_SEED", "20260808"))

settings.register_profile("pointscatter", deadline=None, max_examples=40,
                          derandomize=True)
settings.load_profile("pointscatter")


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)
