"""Shared fixtures and Hypothesis strategies for the quantum walk tests."""

import math

import pytest
from hypothesis import strategies as st

from coin_model import ModelParams, QubitState

INV_SQRT2 = 1.0 / math.sqrt(2.0)

angles = st.floats(min_value=0.0, max_value=2.0 * math.pi, allow_nan=False, allow_infinity=False)


@st.composite
def model_params(draw):
    return ModelParams(draw(angles), draw(angles))


@st.composite
def qubit_states(draw):
    """Normalized states a e^{i phi1}, b e^{i phi2} with a = cos(eta), b = sin(eta)."""
    eta = draw(st.floats(min_value=0.0, max_value=math.pi / 2, allow_nan=False))
    phi1 = draw(angles)
    phi2 = draw(angles)
    return QubitState.from_polar(math.cos(eta), phi1, math.sin(eta), phi2).normalized()


@pytest.fixture
def example_one() -> ModelParams:
    return ModelParams(0.0, 0.0)


@pytest.fixture
def example_two() -> ModelParams:
    return ModelParams(1.5 * math.pi, math.pi)


@pytest.fixture
def generic_params() -> ModelParams:
    """Both singular branches present, sigma- not a multiple of pi."""
    return ModelParams(0.3, 1.0)


@pytest.fixture
def left_state() -> QubitState:
    return QubitState(1.0 + 0j, 0j)


@pytest.fixture
def polar_state() -> QubitState:
    return QubitState.from_polar(math.cos(0.3), 0.7, math.sin(0.3), -1.1)
