import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from altclust import MultiViewDataset


@pytest.fixture
def small_dataset():
    """Two views, six instances, two masked cells."""
    rng = np.random.default_rng(42)
    views = (rng.standard_normal((5, 6)), rng.standard_normal((7, 6)))
    mask = np.ones((2, 6), dtype=int)
    mask[0, 2] = 0
    mask[1, 4] = 0
    views[0][:, 2] = 0.0
    views[1][:, 4] = 0.0
    return MultiViewDataset(views, mask)
