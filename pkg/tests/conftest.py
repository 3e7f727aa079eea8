import pytest
from hypothesis import settings

from erdos_rogers.unital import PartialLinearSpace, build_hermitian_unital

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def unital3():
    return build_hermitian_unital(3)


@pytest.fixture(scope="session")
def unital7():
    return build_hermitian_unital(7)


@pytest.fixture
def onan_pls():
    """Four lines meeting pairwise in six distinct points."""
    return PartialLinearSpace(6, [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)])
