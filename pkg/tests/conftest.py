import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from starq import StarAlgebra, cotangent_flat, moyal_plane, wick_space


@pytest.fixture
def moyal6():
    return StarAlgebra(moyal_plane(1), "moyal", 6)


@pytest.fixture
def wick6():
    return StarAlgebra(wick_space(1), "wick", 6)


@pytest.fixture
def std6():
    return StarAlgebra(cotangent_flat(1, density=("gaussian", 1)), "std", 6)


@pytest.fixture
def weyl6():
    return StarAlgebra(cotangent_flat(1, density=("gaussian", 1)), "weyl", 6)


@pytest.fixture
def weyl_lebesgue6():
    return StarAlgebra(cotangent_flat(1), "weyl", 6)
