import pytest

from eimod import InstanceSpec, cyclic_group
from eimod.instances import (
    arrow_category,
    discrete_category,
    group_category,
    non_mono_category,
)


@pytest.fixture(scope="session")
def fi2():
    return InstanceSpec("FI_G", 2).generate()


@pytest.fixture(scope="session")
def fi3():
    return InstanceSpec("FI_G", 3).generate()


@pytest.fixture(scope="session")
def fi4():
    return InstanceSpec("FI_G", 4).generate()


@pytest.fixture(scope="session")
def fiz2_2():
    return InstanceSpec("FI_G", 2, group=cyclic_group(2)).generate()


@pytest.fixture(scope="session")
def fiz2_3():
    return InstanceSpec("FI_G", 3, group=cyclic_group(2)).generate()


@pytest.fixture(scope="session")
def vi2_2():
    return InstanceSpec("VI_q", 2, q=2).generate()


@pytest.fixture(scope="session")
def z2cat():
    return group_category(cyclic_group(2))


@pytest.fixture(scope="session")
def z3cat():
    return group_category(cyclic_group(3))


@pytest.fixture(scope="session")
def arrow():
    return arrow_category()


@pytest.fixture(scope="session")
def nonmono():
    return non_mono_category()


@pytest.fixture(scope="session")
def discrete3():
    return discrete_category(3)
