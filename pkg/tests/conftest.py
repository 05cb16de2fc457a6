import pytest

from moufang import MabParams, build_mab, cyclic_subgroup, element_of_order, make_ring


@pytest.fixture(scope="session")
def gf2():
    return make_ring("GF:2")


@pytest.fixture(scope="session")
def gf4():
    return make_ring("GF:2^2")


@pytest.fixture(scope="session")
def gf7():
    return make_ring("GF:7")


@pytest.fixture(scope="session")
def gf8():
    return make_ring("GF:2^3")


@pytest.fixture(scope="session")
def gf25():
    return make_ring("GF:5^2")


@pytest.fixture(scope="session")
def loop8(gf2):
    return build_mab(MabParams(gf2, cyclic_subgroup(gf2.one), gf2.one, gf2.zero))


@pytest.fixture(scope="session")
def loop192(gf4):
    r0 = cyclic_subgroup(element_of_order(gf4, 3))
    return build_mab(MabParams(gf4, r0, gf4.one, gf4.zero))


@pytest.fixture(scope="session")
def loop1029(gf7):
    r0 = cyclic_subgroup(gf7.element(2))
    return build_mab(MabParams(gf7, r0, gf7.one, gf7.from_literal(-2)))


@pytest.fixture(scope="session")
def loop3584(gf8):
    r0 = cyclic_subgroup(element_of_order(gf8, 7))
    return build_mab(MabParams(gf8, r0, gf8.one, gf8.zero))


@pytest.fixture(scope="session")
def loop46875(gf25):
    r0 = cyclic_subgroup(element_of_order(gf25, 3))
    return build_mab(MabParams(gf25, r0, gf25.one, gf25.from_literal(-2)))
