"""Choice of channel gain and price for the net-utility experiments.

Neither the link gain nor the price ``k`` behind the published net-utility
curves is known, so both are picked here by rule:

* ``gain``: the VMIMO link (per-node power ``p / m`` on each of ``n_rx``
  branches) overtakes the single-antenna link at ``crossover_mw``. Below that
  power, splitting starves every branch of SNR; above it, the extra branches
  win.
* ``cost_k``: net utility of the VMIMO link crosses zero at ``threshold_mw``.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .channel import ChannelModel
from .energy import AntennaConfig
from .errors import DomainError
from .modulation import ModulationScheme, bit_error_probability, efficiency_function

__all__ = ["crossover_snr", "calibrate_gain", "calibrate_cost", "calibrate"]

CROSSOVER_MW = 10.0
THRESHOLD_MW = 80.0


def _f(scheme, frame_bits, gamma):
    return efficiency_function(bit_error_probability(scheme, gamma), frame_bits)


def crossover_snr(scheme, frame_bits, antennas):
    """Single-antenna SNR above which the split VMIMO link delivers more."""
    scheme = ModulationScheme.parse(scheme)
    m, n = antennas.split, antennas.n_rx

    def gap(gamma):
        return n * _f(scheme, frame_bits, gamma / m) - _f(scheme, frame_bits, gamma)

    grid = np.geomspace(1e-2, 1e4, 2001)
    vals = np.array([gap(g) for g in grid])
    idx = np.flatnonzero((vals[:-1] < 0) & (vals[1:] >= 0))
    if idx.size == 0:
        raise DomainError(f"no VMIMO/SISO crossover for {scheme.value}, F={frame_bits}")
    i = int(idx[-1])
    return brentq(gap, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15)


def calibrate_gain(scheme, frame_bits, antennas=None, crossover_mw=CROSSOVER_MW):
    antennas = antennas or AntennaConfig(2, 2)
    return crossover_snr(scheme, frame_bits, antennas) / crossover_mw


def calibrate_cost(config, threshold_mw=THRESHOLD_MW):
    """Price making the net utility vanish exactly at ``threshold_mw``."""
    from .game import utility_vmimo

    return utility_vmimo(threshold_mw, config.replace(cost_k=0.0)).gross_utility / threshold_mw


def calibrate(config, crossover_mw=CROSSOVER_MW, threshold_mw=THRESHOLD_MW):
    """Return ``config`` with a calibrated link-budget channel and price."""
    gain = calibrate_gain(config.scheme, config.frame.frame_bits, config.antennas, crossover_mw)
    cfg = config.replace(channel=ChannelModel.link_budget(gain, config.channel.interference))
    return cfg.replace(cost_k=calibrate_cost(cfg, threshold_mw))
