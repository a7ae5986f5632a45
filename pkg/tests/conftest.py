import numpy as np
import pytest

from sumrank.gf import load_tower


@pytest.fixture(scope="session")
def t4():
    """F_4 as a degree-2 extension of F_2 (n=1, m=2)."""
    return load_tower(2, 1, 2)


@pytest.fixture(scope="session")
def t16():
    """F_16 with subfield F_4 (h=2, n=2, m=2)."""
    return load_tower(2, 2, 2)


@pytest.fixture(scope="session")
def t256():
    """F_256 with subfield F_16 (h=2, n=4, m=2)."""
    return load_tower(2, 4, 2)


@pytest.fixture(scope="session")
def t4096():
    """F_4096 with subfield F_4 (h=2, n=2, m=6); the folded demo tower."""
    return load_tower(2, 2, 6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
