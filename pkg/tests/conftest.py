import random

import pytest

from group_variety_cohomology.src.core_model import GL, SL, AbelianVariety, Extension, Torus

SEED = 20240917


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def gl2():
    return GL(2)


@pytest.fixture
def gl3():
    return GL(3)


@pytest.fixture
def sl2():
    return SL(2)


@pytest.fixture
def torus_by_curve():
    """ext(torus(1), abelian(1; t^2+3t+5)): the curve y^2 = x^3 + x + 1 over F_5 has 9 points."""
    return Extension(Torus(1), AbelianVariety(1, (1, 3, 5)))
