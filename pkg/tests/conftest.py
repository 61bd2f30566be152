import numpy as np
import pytest

from dunkl_lab.quad import RadialGrid, jitter_off_hyperplanes, sphere_rule
from dunkl_lab.reflection import build_root_system


@pytest.fixture(scope="session")
def rs_a2():
    return build_root_system("A", 2, [1])


@pytest.fixture(scope="session")
def rs_b2():
    return build_root_system("B", 2, [1, 1])


@pytest.fixture(scope="session")
def rs_z23():
    return build_root_system("Z2", 3, [1, 1, 1])


@pytest.fixture(scope="session")
def rule_a2(rs_a2):
    return jitter_off_hyperplanes(sphere_rule(3, 14), rs_a2)


@pytest.fixture(scope="session")
def grid_unit():
    return RadialGrid((0.0, 0.5, 1.0, 2.0, 3.0), nodes_per_interval=48)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)
