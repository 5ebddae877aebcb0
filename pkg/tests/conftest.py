import pytest

from beepreader import driver, machine


@pytest.fixture(scope="session")
def default_profile_parsed():
    return machine.load_machine_profile(None)


@pytest.fixture
def sim():
    """Fresh default machine: (bus, controller, codec), reset released."""
    return machine.build_machine()


@pytest.fixture
def binding(sim):
    bus, _, _ = sim
    return driver.attach(bus)
