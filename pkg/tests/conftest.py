import pytest

from zposc.model import OscillatorParams, ThermalState


@pytest.fixture
def params():
    """Natural units, no coupling."""
    return OscillatorParams()


@pytest.fixture
def damped_params():
    return OscillatorParams(tau=1e-3)


@pytest.fixture
def cold():
    return ThermalState(0.0)


@pytest.fixture
def warm():
    return ThermalState(1.0)
