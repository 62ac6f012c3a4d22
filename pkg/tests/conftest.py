import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def cnormal(rng, n=None, scale=1.0):
    """Complex normal draws; never returns values close to zero."""
    size = n or 1
    out = rng.normal(0, scale, size) + 1j * rng.normal(0, scale, size)
    small = np.abs(out) < 0.15 * scale
    out[small] += 0.5 * scale * (1 + 1j)
    return out if n else complex(out[0])
