"""
Shared fixtures for the deployment tests.
"""

import pytest

from deployment.generators import figure1_instance, figure4_instance, star_instance
from deployment.models import Variant, as_tree


@pytest.fixture
def fig1():
    """The 5-vertex introductory instance (no-return)."""
    return figure1_instance()


@pytest.fixture
def fig1_tree(fig1):
    return as_tree(fig1)


@pytest.fixture
def fig4():
    """The 14-vertex decomposition tree (return)."""
    return figure4_instance()


@pytest.fixture
def star():
    """Star with 3 leaves and edge weights 3, 2, 1 (return)."""
    return star_instance(3, Variant.RETURN)
