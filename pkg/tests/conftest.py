import pytest

from grouplen.src.config.settings import Config
from grouplen.src.core.named_groups import (
    alternating_group,
    cyclic_group,
    dihedral_group,
    direct_product,
    general_linear_group,
    special_linear_group,
    symmetric_group,
)
from grouplen.src.core.permcore import PermutationGroup
from grouplen.src.core.structure import SigmaPartition


@pytest.fixture(autouse=True)
def fresh_config():
    """Every test starts from the layered defaults."""
    Config.reset()
    yield
    Config.reset()


@pytest.fixture
def tight_caps():
    Config.apply_overrides({"element_cap": 5000, "subgroup_cap": 200, "class_cap": 24})


@pytest.fixture
def per_prime():
    return SigmaPartition.per_prime()


@pytest.fixture
def trivial():
    return PermutationGroup(1, [], name="Trivial")


@pytest.fixture
def c2():
    return cyclic_group(2)


@pytest.fixture
def c3():
    return cyclic_group(3)


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def s4():
    return symmetric_group(4)


@pytest.fixture
def a4():
    return alternating_group(4)


@pytest.fixture
def a5():
    return alternating_group(5)


@pytest.fixture
def d8():
    return dihedral_group(4)


@pytest.fixture
def sl23():
    return special_linear_group(3)


@pytest.fixture
def gl23():
    return general_linear_group(3)


@pytest.fixture
def sl25():
    return special_linear_group(5)


@pytest.fixture
def a5_x_c2():
    return direct_product(alternating_group(5), cyclic_group(2))
