import pytest

from nanospin import ParticleSpec, QuadratureConfig, ThermalState


@pytest.fixture(scope="session")
def particle():
    return ParticleSpec()


@pytest.fixture(scope="session")
def thermal():
    return ThermalState()


@pytest.fixture(scope="session")
def quad():
    return QuadratureConfig()
