import pytest

from vmimo_game import AntennaConfig, ChannelModel, GameConfig, StrategyGrid
from vmimo_game.config import default_config


@pytest.fixture(scope="session")
def calibrated():
    """Shipped default: 2x2 array, calibrated link budget and price."""
    return default_config()


@pytest.fixture(scope="session")
def calibrated_siso(calibrated):
    return calibrated.replace(antennas=AntennaConfig(1, 1))


@pytest.fixture
def exogenous_siso():
    return GameConfig(antennas=AntennaConfig(1, 1), channel=ChannelModel.exogenous_db(10.0),
                      grid=StrategyGrid.uniform(1, 100, 100))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
