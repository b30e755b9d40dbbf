"""Shared fixtures: the bundled surfaces and their curve classes."""

from pathlib import Path

import pytest

from src.surface_config import load_surface

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def p2():
    return load_surface("p2")


@pytest.fixture
def x_surface():
    """P^2 blown up at a point and at an infinitely near point."""
    return load_surface("p2-double-blowup")


@pytest.fixture
def cls(x_surface):
    """Parse a class on the double blow-up: cls("C+Fb+2Fp")."""
    from src.parsing import parse_class

    return lambda text: parse_class(text, x_surface)
