import pytest

from ammix import CurveParams, MarketState


@pytest.fixture
def unit_params():
    """Symmetric curve through (1, 1) with rate 1."""
    return CurveParams(1.0, 1.0, 1.0, 1.0)


@pytest.fixture
def pool_params():
    """The simulation pool: rate 0.5 anchored at (3000, 1000)."""
    return CurveParams(1.0, 2.0, 3000.0, 1000.0)


@pytest.fixture
def unit_state():
    return MarketState(1.0, 1.0)


def central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def second_diff(f, x, h):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
