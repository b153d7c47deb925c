"""Mapping from per-node transmit power to expected receiver SNR."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["ChannelMode", "ChannelModel", "received_snr", "free_space_gain"]

BOLTZMANN = 1.380649e-23


class ChannelMode(str, enum.Enum):
    EXOGENOUS = "exogenous"
    LINK_BUDGET = "link_budget"


@dataclass(frozen=True)
class ChannelModel:
    """Either a fixed SNR (``exogenous``) or ``gamma = gain * p`` (``link_budget``).

    ``interference`` is an optional cross-player coupling, per mW of every
    other transmitting player, relative to the noise floor:
    ``gamma_i = gain * p_i / (1 + interference * sum(p_j, j != i))``.
    It is zero by default, which leaves the players' payoffs independent.
    """

    mode: ChannelMode = ChannelMode.LINK_BUDGET
    gamma_fixed: float | None = None
    gain: float | None = None
    interference: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", ChannelMode(self.mode))
        if self.mode is ChannelMode.EXOGENOUS:
            if self.gamma_fixed is None or not (
                math.isfinite(self.gamma_fixed) and self.gamma_fixed > 0
            ):
                raise DomainError(
                    f"exogenous channel needs gamma_fixed > 0, got {self.gamma_fixed!r}"
                )
        else:
            if self.gain is None or not (math.isfinite(self.gain) and self.gain > 0):
                raise DomainError(f"link_budget channel needs gain > 0, got {self.gain!r}")
        if not (math.isfinite(self.interference) and self.interference >= 0):
            raise DomainError(f"interference must be >= 0, got {self.interference!r}")

    @classmethod
    def exogenous(cls, gamma, interference=0.0):
        return cls(ChannelMode.EXOGENOUS, gamma_fixed=float(gamma), interference=interference)

    @classmethod
    def exogenous_db(cls, gamma_db, interference=0.0):
        return cls.exogenous(10.0 ** (gamma_db / 10.0), interference)

    @classmethod
    def link_budget(cls, gain, interference=0.0):
        return cls(ChannelMode.LINK_BUDGET, gain=float(gain), interference=interference)

    @classmethod
    def from_reference(cls, p_ref, gamma_ref, interference=0.0):
        """Link budget through the point ``(p_ref mW, gamma_ref linear)``."""
        if not (p_ref > 0 and gamma_ref > 0):
            raise DomainError("reference power and SNR must both be > 0")
        return cls.link_budget(gamma_ref / p_ref, interference)


def received_snr(model, p_node, interfering_power=0.0):
    """Linear SNR seen at the receiver when a node transmits at ``p_node`` mW.

    ``interfering_power`` is the summed power of the other players; it only
    matters when the model has a non-zero ``interference`` coefficient.
    """
    if model.mode is ChannelMode.EXOGENOUS:
        if not p_node >= 0:
            raise DomainError(f"transmit power must be >= 0, got {p_node!r}")
        gamma = model.gamma_fixed
    else:
        if not (math.isfinite(p_node) and p_node > 0):
            raise DomainError(
                f"link_budget channel needs transmit power > 0, got {p_node!r}"
            )
        gamma = model.gain * p_node
    if model.interference and interfering_power:
        gamma = gamma / (1.0 + model.interference * interfering_power)
    return gamma


def free_space_gain(distance_m, frequency_hz, noise_figure_db=0.0, bandwidth_hz=1.0e6,
                    tx_gain_dbi=0.0, rx_gain_dbi=0.0, temperature_k=290.0):
    """Linear SNR per mW of transmit power over a free-space link.

    Convenience helper that collapses the Friis equation and thermal noise
    ``k T B NF`` into the single gain used by :class:`ChannelModel`.
    """
    wavelength = 299_792_458.0 / frequency_hz
    path = (wavelength / (4.0 * math.pi * distance_m)) ** 2
    antenna = 10.0 ** ((tx_gain_dbi + rx_gain_dbi) / 10.0)
    noise_w = BOLTZMANN * temperature_k * bandwidth_hz * 10.0 ** (noise_figure_db / 10.0)
    return 1.0e-3 * path * antenna / noise_w
