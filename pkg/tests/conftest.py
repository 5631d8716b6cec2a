import os
import sys
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from rate_regions.config import CONFIG_DIR  # noqa: E402
from rate_regions.models.network import CombinationNetwork  # noqa: E402
from rate_regions.models.polyhedra import NumericPolyhedron, Row  # noqa: E402
from rate_regions.utils.config_loader import load_network  # noqa: E402


def F(value) -> Fraction:
    return Fraction(value)


def poly(variables, rows, equalities=()):
    """Numeric polyhedron from (coeffs, bound) pairs."""
    return NumericPolyhedron(
        tuple(variables),
        tuple(Row(tuple(F(c) for c in coeffs), F(b)) for coeffs, b in rows),
        tuple(Row(tuple(F(c) for c in coeffs), F(b)) for coeffs, b in equalities),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def asymmetric_net() -> CombinationNetwork:
    return load_network(os.path.join(CONFIG_DIR, "three_user_asymmetric.cfg"))


@pytest.fixture
def three_link_net() -> CombinationNetwork:
    return load_network(os.path.join(CONFIG_DIR, "six_user_three_links.cfg"))


@pytest.fixture
def six_link_net() -> CombinationNetwork:
    return load_network(os.path.join(CONFIG_DIR, "seven_user_six_links.cfg"))


@pytest.fixture
def zero_net() -> CombinationNetwork:
    return CombinationNetwork.zero(3)
