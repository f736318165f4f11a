import sys
from pathlib import Path

import numpy as np
import pytest

from icctab import DataTable, SynthSpec, generate, zscore

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def small_table() -> DataTable:
    """4x3 table with two missing cells."""
    values = np.array(
        [
            [1.0, 2.0, 3.0],
            [4.0, np.nan, 6.0],
            [7.0, 8.0, np.nan],
            [2.0, 5.0, 1.0],
        ]
    )
    return DataTable(values)


@pytest.fixture
def complete_table() -> DataTable:
    """5x4 complete table with nontrivial row and column structure."""
    rng = np.random.default_rng(2024)
    base = rng.normal(0, 1, size=(5, 4))
    rows = rng.normal(0, 2, size=5)
    return DataTable(base + rows[:, None])


@pytest.fixture(scope="session")
def z_table_1400x80() -> DataTable:
    """Z-scored additive-model table at the standard experiment shape."""
    raw, _ = generate(SynthSpec(rows=1400, cols=80, seed=4242))
    return zscore(raw)
