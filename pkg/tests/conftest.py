import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def random_dataset(rng, n, d, missing_fraction=0.2, scale=1.0):
    """Random dataset whose every row and column keeps at least one entry."""
    from igh import Dataset

    values = rng.normal(0.0, scale, size=(n, d))
    while True:
        mask = rng.random((n, d)) >= missing_fraction
        if mask.any(axis=0).all() and mask.any(axis=1).all():
            return Dataset(values.copy(), mask)
