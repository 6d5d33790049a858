import numpy as np
import pytest

from blockprod import BlockUpperTriangular, INF_NORM, norm_value


def random_complex(rng, rows, cols, scale=1.0):
    return scale * (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    )


def random_contracting(rng, m, target=0.9):
    """A random m x m complex matrix scaled so its inf norm is at most target."""
    c = random_complex(rng, m, m)
    val = norm_value(c, INF_NORM)
    if val > 0:
        c *= target * rng.uniform(0.2, 1.0) / val
    return c


def random_block(rng, s, m, bscale=1.0, cnorm=0.9):
    return BlockUpperTriangular(
        s, random_complex(rng, s, m, bscale), random_contracting(rng, m, cnorm)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20230817)
