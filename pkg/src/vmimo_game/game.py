"""Payoffs of the transmit-power game.

A player's action is either ``None`` (stay silent) or a power level in mW
taken from its :class:`StrategyGrid`. The gross utility of a transmitting
player is the number of information bits delivered per unit of power,

    u = sum_j  b r_j f(gamma_j) / (F * sum_{m cooperating senders} p / m),

with ``m = min(n_tx, n_rx)`` and ``f(gamma) = (1 - 2 Pe) ** F``. For a
single-antenna link this collapses to ``b r f(gamma) / (F p)``. A linear
price ``k p`` is subtracted to obtain the net utility; silence earns zero.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from .channel import ChannelMode, ChannelModel, received_snr
from .energy import (
    AmplifierParams,
    AntennaConfig,
    CircuitPowerParams,
    amplifier_power,
    circuit_power,
    total_power,
)
from .errors import DomainError
from .modulation import (
    FrameFormat,
    ModulationScheme,
    bit_error_probability,
    efficiency_function,
    frame_success_probability,
)

__all__ = [
    "Spacing",
    "StrategyGrid",
    "GameConfig",
    "UtilityReport",
    "ThresholdResult",
    "EfficiencyReport",
    "utility_siso",
    "utility_vmimo",
    "cost",
    "net_utility",
    "net_utility_curve",
    "threshold_power",
    "expected_power_efficiency",
    "power_efficiency_curve",
    "interfering_power",
]

class Spacing(str, enum.Enum):
    UNIFORM = "uniform"
    GEOMETRIC = "geometric"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class StrategyGrid:
    levels: tuple
    spacing: Spacing = Spacing.EXPLICIT

    def __post_init__(self):
        levels = tuple(float(x) for x in self.levels)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "spacing", Spacing(self.spacing))
        if len(levels) < 2:
            raise DomainError("a strategy grid needs at least 2 levels")
        if not all(math.isfinite(x) for x in levels) or levels[0] <= 0:
            raise DomainError("grid levels must be finite and > 0")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise DomainError("grid levels must be strictly increasing")

    @classmethod
    def uniform(cls, p_min=1.0, p_max=100.0, n_levels=100):
        return cls(tuple(np.linspace(p_min, p_max, n_levels)), Spacing.UNIFORM)

    @classmethod
    def geometric(cls, p_min=1.0, p_max=100.0, n_levels=20):
        return cls(tuple(np.geomspace(p_min, p_max, n_levels)), Spacing.GEOMETRIC)

    @property
    def p_min(self):
        return self.levels[0]

    @property
    def p_max(self):
        return self.levels[-1]

    def __len__(self):
        return len(self.levels)

    def __contains__(self, p):
        return p in self.levels

    def as_array(self):
        return np.asarray(self.levels)


@dataclass(frozen=True)
class GameConfig:
    frame: FrameFormat = field(default_factory=FrameFormat)
    scheme: ModulationScheme = ModulationScheme.BPSK
    cost_k: float = 0.0
    antennas: AntennaConfig = field(default_factory=AntennaConfig)
    channel: ChannelModel = field(default_factory=lambda: ChannelModel.exogenous(10.0))
    grid: StrategyGrid = field(default_factory=StrategyGrid.uniform)
    n_players: int = 1
    branch_rates: Optional[tuple] = None
    amplifier: AmplifierParams = field(default_factory=AmplifierParams)
    circuit: CircuitPowerParams = field(default_factory=CircuitPowerParams)

    def __post_init__(self):
        object.__setattr__(self, "scheme", ModulationScheme.parse(self.scheme))
        if not (math.isfinite(self.cost_k) and self.cost_k >= 0):
            raise DomainError(f"cost_k must be finite and >= 0, got {self.cost_k!r}")
        if isinstance(self.n_players, bool) or not isinstance(self.n_players, int) \
                or self.n_players < 1:
            raise DomainError(f"n_players must be a positive integer, got {self.n_players!r}")
        if self.branch_rates is not None:
            rates = tuple(float(r) for r in self.branch_rates)
            if len(rates) != self.antennas.n_rx:
                raise DomainError(
                    f"branch_rates needs {self.antennas.n_rx} entries, got {len(rates)}"
                )
            if any(not (math.isfinite(r) and r > 0) for r in rates):
                raise DomainError("branch_rates must all be > 0")
            object.__setattr__(self, "branch_rates", rates)

    @property
    def rates(self):
        """Per-receive-branch rates; the common frame rate unless overridden."""
        if self.branch_rates is not None:
            return self.branch_rates
        return (self.frame.rate_bps,) * self.antennas.n_rx

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class UtilityReport:
    gross_utility: float
    cost: float
    net_utility: float
    gamma_used: Optional[float]
    per_branch_terms: tuple
    transmitting: bool = True

    @classmethod
    def silent(cls, n_branches=1):
        return cls(0.0, 0.0, 0.0, None, (0.0,) * n_branches, transmitting=False)


def _check_power(p):
    if not (isinstance(p, (int, float, np.floating, np.integer))
            and math.isfinite(p) and p > 0):
        raise DomainError(f"transmit power must be finite and > 0, got {p!r}")


def cost(p, k):
    """Linear price of transmitting at ``p`` mW."""
    return k * p


def utility_siso(p, config, interference=0.0):
    """Payoff of a single-antenna link at transmit power ``p``."""
    _check_power(p)
    gamma = received_snr(config.channel, p, interference)
    f = efficiency_function(bit_error_probability(config.scheme, gamma),
                            config.frame.frame_bits)
    b, F, r = config.frame.info_bits, config.frame.frame_bits, config.frame.rate_bps
    gross = b * r * f / (F * p)
    c = cost(p, config.cost_k)
    return UtilityReport(gross, c, gross - c, gamma, (gross,))


def utility_vmimo(p, config, interference=0.0):
    """Payoff when the ``min(n_tx, n_rx)`` cooperating senders split ``p``.

    Every cooperating sender mirrors the focal player's level, so the
    per-node power is ``p / m`` and each of the ``n_rx`` branches sees the
    SNR produced by that per-node power.
    """
    _check_power(p)
    m = config.antennas.split
    p_node = p / m
    denom = sum(p_node for _ in range(m))
    gamma = received_snr(config.channel, p_node, interference)
    f = efficiency_function(bit_error_probability(config.scheme, gamma),
                            config.frame.frame_bits)
    b, F = config.frame.info_bits, config.frame.frame_bits
    terms = tuple(b * r_j * f / (F * denom) for r_j in config.rates)
    gross = sum(terms)
    c = cost(p, config.cost_k)
    return UtilityReport(gross, c, gross - c, gamma, terms)


def interfering_power(others, config):
    """Summed per-node power of the transmitting players in ``others``."""
    m = config.antennas.split
    return sum(p / m for p in others if p is not None)


def net_utility(action, config, others=()):
    """Net payoff of ``action`` (``None`` means silent) with ``others`` fixed."""
    if action is None:
        return UtilityReport.silent(config.antennas.n_rx)
    return utility_vmimo(action, config, interfering_power(others, config))


def net_utility_curve(powers, config, interference=0.0):
    """Vectorised net utility over an array of transmit powers."""
    p = np.asarray(powers, dtype=float)
    if np.any(~np.isfinite(p)) or np.any(p <= 0):
        raise DomainError("transmit powers must be finite and > 0")
    m = config.antennas.split
    p_node = p / m
    if config.channel.mode is ChannelMode.EXOGENOUS:
        gamma = np.full_like(p, config.channel.gamma_fixed)
    else:
        gamma = config.channel.gain * p_node
    if config.channel.interference and interference:
        gamma = gamma / (1.0 + config.channel.interference * interference)
    f = efficiency_function(bit_error_probability(config.scheme, gamma),
                            config.frame.frame_bits)
    b, F = config.frame.info_bits, config.frame.frame_bits
    gross = sum(b * r_j for r_j in config.rates) * f / (F * (p_node * m))
    return gross - config.cost_k * p


class ThresholdResult(NamedTuple):
    power: Optional[float]
    reason: str


def threshold_power(config, others=(), scan_points=4096):
    """Largest power in ``[p_min, p_max]`` at which transmitting breaks even.

    Returns ``ThresholdResult(None, reason)`` when the net utility never
    reaches zero from above inside the range.
    """
    lo, hi = config.grid.p_min, config.grid.p_max
    interference = interfering_power(others, config)
    scan = np.linspace(lo, hi, scan_points)
    values = net_utility_curve(scan, config, interference)
    if np.all(values < 0):
        return ThresholdResult(None, "always negative")
    if values[-1] > 0:
        return ThresholdResult(None, "never crosses zero")
    if values[-1] == 0:
        return ThresholdResult(float(hi), "crossing")
    i = int(np.flatnonzero(values >= 0)[-1])

    def g(p):
        return utility_vmimo(p, config, interference).net_utility

    a, b = float(scan[i]), float(scan[i + 1])
    if g(a) == 0:
        return ThresholdResult(a, "crossing")
    p_t = brentq(g, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=200)
    return ThresholdResult(float(p_t), "crossing")


@dataclass(frozen=True)
class EfficiencyReport:
    power: float
    node_power: float
    gamma: float
    bit_error: float
    success: float
    efficiency: float
    expected_transmissions: float


def expected_power_efficiency(p, config):
    """Frames delivered per mW spent under retransmit-until-success.

    The number of attempts is geometric with success probability ``p_s``,
    so the expected spend per delivered frame is ``p_node / p_s``.
    """
    _check_power(p)
    p_node = p / config.antennas.split
    gamma = received_snr(config.channel, p_node)
    pe = bit_error_probability(config.scheme, gamma)
    ps = frame_success_probability(pe, config.frame.frame_bits)
    if ps == 0.0:
        return EfficiencyReport(p, p_node, gamma, pe, 0.0, 0.0, math.inf)
    return EfficiencyReport(p, p_node, gamma, pe, ps, ps / p_node, 1.0 / ps)


def power_efficiency_curve(powers, config):
    p = np.asarray(powers, dtype=float)
    p_node = p / config.antennas.split
    if config.channel.mode is ChannelMode.EXOGENOUS:
        gamma = np.full_like(p, config.channel.gamma_fixed)
    else:
        gamma = config.channel.gain * p_node
    pe = bit_error_probability(config.scheme, gamma)
    ps = frame_success_probability(pe, config.frame.frame_bits)
    return ps / p_node


def power_budget(p, config):
    """``(amplifier, circuit, total)`` power drawn when transmitting at ``p`` mW."""
    p_pa = amplifier_power(p, config.amplifier)
    p_c = circuit_power(config.circuit, config.antennas)
    return p_pa, p_c, total_power(p_pa, p_c)
