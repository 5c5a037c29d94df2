import os
import sys

import numpy as np
import pytest

# Add the project root to the Python path
parent_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.append(parent_dir)

from app.services.double import build_borel, build_double
from app.services.verification import finite_pair


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def s3_pair():
    """S3 ⊇ <(0 1)> as (group, subgroup, subgroup map)."""
    return finite_pair("S3", ["(0 1)"])


@pytest.fixture(scope="session")
def a3_pair():
    return finite_pair("S3", ["(0 1 2)"])


@pytest.fixture(scope="session")
def z4_pair():
    from app.models.groups import preset_group
    z4 = preset_group("Z4")
    order_two = [name for g, name in enumerate(z4.elements) if z4.element_order(g) == 2]
    return finite_pair("Z4", order_two)


@pytest.fixture(scope="session")
def double_half():
    """A(G_q) truncated at spin ½."""
    return build_double(1)


@pytest.fixture(scope="session")
def borel_half(double_half):
    return build_borel(double_half)
