import pytest

from qacodes.gf_arith import field_new
from qacodes.group_algebra import AbelianGroupSpec, GroupAlgebra


@pytest.fixture(scope="session")
def F2():
    return field_new(2)


@pytest.fixture(scope="session")
def F3():
    return field_new(3)


@pytest.fixture(scope="session")
def F4():
    return field_new(2, 2)


def cyclic(*orders):
    return AbelianGroupSpec(tuple(orders))


@pytest.fixture
def Z3_over_F2(F2):
    return GroupAlgebra(F2, cyclic(3))


@pytest.fixture
def Z2_over_F2(F2):
    return GroupAlgebra(F2, cyclic(2))
