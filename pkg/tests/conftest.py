import pytest

from app.services.poset_core import build_poset


@pytest.fixture
def example_poset():
    """1,2 < 3 < 4,5,6"""
    return build_poset(6, [(1, 3), (2, 3), (3, 4), (3, 5), (3, 6)])


@pytest.fixture
def height_three_poset():
    """1,2 < 3 < 5 < 6,7 and 2 < 4 < 7"""
    return build_poset(7, [(1, 3), (2, 3), (3, 5), (5, 6), (5, 7), (2, 4), (4, 7)])


@pytest.fixture
def chain4():
    return build_poset(4, [(1, 2), (2, 3), (3, 4)])


@pytest.fixture
def antichain3():
    return build_poset(3, [])
