"""Non-cooperative transmit-power game for virtual-MIMO sensor links."""

__version__ = "0.1.0"

from .channel import ChannelMode, ChannelModel, received_snr  # noqa: E402
from .energy import (  # noqa: E402
    AmplifierParams,
    AntennaConfig,
    CircuitPowerParams,
    amplifier_power,
    circuit_power,
    per_node_transmit_power,
    total_power,
)
from .equilibrium import (  # noqa: E402
    EquilibriumResult,
    best_response,
    enumerate_nash_bruteforce,
    find_equilibrium,
    verify_nash,
)
from .errors import ConfigError, DomainError  # noqa: E402
from .game import (  # noqa: E402
    GameConfig,
    StrategyGrid,
    UtilityReport,
    cost,
    expected_power_efficiency,
    net_utility,
    threshold_power,
    utility_siso,
    utility_vmimo,
)
from .modulation import (  # noqa: E402
    FrameFormat,
    LinkQuality,
    ModulationScheme,
    bit_error_probability,
    efficiency_function,
    frame_error_probability,
    frame_success_probability,
)
