"""Transceiver power accounting for a virtual-MIMO link.

All powers are in milliwatts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import DomainError

__all__ = [
    "AmplifierParams",
    "CircuitPowerParams",
    "AntennaConfig",
    "amplifier_power",
    "circuit_power",
    "total_power",
    "per_node_transmit_power",
]


@dataclass(frozen=True)
class AmplifierParams:
    drain_efficiency: float = 1.0
    peak_to_average: float = 1.0

    def __post_init__(self):
        if not (0 < self.drain_efficiency <= 1):
            raise DomainError(
                f"drain_efficiency must be in (0, 1], got {self.drain_efficiency!r}"
            )
        if not (math.isfinite(self.peak_to_average) and self.peak_to_average >= 1):
            raise DomainError(
                f"peak_to_average must be >= 1, got {self.peak_to_average!r}"
            )

    @property
    def alpha(self):
        """Amplifier overhead factor ``xi / eta - 1``."""
        return self.peak_to_average / self.drain_efficiency - 1.0


@dataclass(frozen=True)
class CircuitPowerParams:
    """Per-block circuit powers. ``p_filt_tx``/``p_filt_rx`` are the active filters."""

    p_dac: float = 0.0
    p_mix: float = 0.0
    p_filt_tx: float = 0.0
    p_synth: float = 0.0
    p_lna: float = 0.0
    p_ifa: float = 0.0
    p_filt_rx: float = 0.0
    p_adc: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{f.name} must be finite and >= 0, got {v!r}")

    @property
    def tx_chain(self):
        return self.p_dac + self.p_mix + self.p_filt_tx

    @property
    def rx_chain(self):
        return self.p_lna + self.p_mix + self.p_ifa + self.p_filt_rx + self.p_adc


@dataclass(frozen=True)
class AntennaConfig:
    n_tx: int = 2
    n_rx: int = 2

    def __post_init__(self):
        for name in ("n_tx", "n_rx"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")

    @property
    def split(self):
        """Number of nodes sharing the transmit power, ``min(n_tx, n_rx)``."""
        return min(self.n_tx, self.n_rx)

    @property
    def is_siso(self):
        return self.n_tx == 1 and self.n_rx == 1


def amplifier_power(p_out, params):
    """Power drawn by the amplifiers for an output power ``p_out``."""
    if not (math.isfinite(p_out) and p_out >= 0):
        raise DomainError(f"p_out must be finite and >= 0, got {p_out!r}")
    return (1.0 + params.alpha) * p_out


def circuit_power(params, antennas):
    return (
        antennas.n_tx * params.tx_chain
        + 2.0 * params.p_synth
        + antennas.n_rx * params.rx_chain
    )


def total_power(p_pa, p_c):
    return p_pa + p_c


def per_node_transmit_power(p_total, antennas):
    """Share of ``p_total`` carried by each cooperating sender."""
    if not (math.isfinite(p_total) and p_total >= 0):
        raise DomainError(f"p_total must be finite and >= 0, got {p_total!r}")
    return p_total / antennas.split
