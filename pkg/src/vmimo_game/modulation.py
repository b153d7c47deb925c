"""Bit-error and frame-level success models for FSK, DPSK and BPSK.

All SNR arguments are linear (not dB). The BER expressions are the
exponential approximations

    FSK   Pe = 0.5 exp(-gamma / 2)     (noncoherent)
    DPSK  Pe = 0.5 exp(-gamma)
    BPSK  Pe = 0.5 exp(-sqrt(gamma))

Note that with these forms BPSK is *worse* than DPSK for gamma > 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "ModulationScheme",
    "LinkQuality",
    "FrameFormat",
    "db_to_linear",
    "linear_to_db",
    "bit_error_probability",
    "efficiency_function",
    "frame_success_probability",
    "frame_error_probability",
]


class ModulationScheme(str, enum.Enum):
    FSK = "FSK"
    DPSK = "DPSK"
    BPSK = "BPSK"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(
                f"unknown modulation scheme {value!r}; expected one of "
                f"{[s.value for s in cls]}"
            ) from None


def db_to_linear(db):
    if np.ndim(db):
        return 10.0 ** (np.asarray(db, dtype=float) / 10.0)
    return 10.0 ** (float(db) / 10.0)


def linear_to_db(x):
    if np.ndim(x):
        return 10.0 * np.log10(np.asarray(x, dtype=float))
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class LinkQuality:
    """Expected receiver SNR, held in linear units."""

    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError(f"gamma must be finite and > 0, got {self.gamma!r}")

    @property
    def gamma_db(self):
        return 10.0 * math.log10(self.gamma)

    @classmethod
    def from_db(cls, gamma_db):
        return cls(10.0 ** (gamma_db / 10.0))


@dataclass(frozen=True)
class FrameFormat:
    """Packet layout: ``info_bits`` payload bits out of ``frame_bits`` total."""

    info_bits: int = 32
    frame_bits: int = 40
    rate_bps: float = 1.0e6

    def __post_init__(self):
        for name in ("info_bits", "frame_bits"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")
        if self.info_bits > self.frame_bits:
            raise DomainError(
                f"info_bits ({self.info_bits}) exceeds frame_bits ({self.frame_bits})"
            )
        if not (math.isfinite(self.rate_bps) and self.rate_bps > 0):
            raise DomainError(f"rate_bps must be > 0, got {self.rate_bps!r}")


def _check_gamma(gamma):
    g = np.asarray(gamma, dtype=float)
    if not np.all(np.isfinite(g)) or np.any(g <= 0):
        raise DomainError(f"SNR must be finite and > 0, got {gamma!r}")
    return g


def bit_error_probability(scheme, gamma):
    """Bit error probability for ``scheme`` at linear SNR ``gamma``.

    Accepts a scalar or an array; returns the same shape.
    """
    scheme = ModulationScheme.parse(scheme)
    g = _check_gamma(gamma)
    if scheme is ModulationScheme.FSK:
        pe = 0.5 * np.exp(-g / 2.0)
    elif scheme is ModulationScheme.DPSK:
        pe = 0.5 * np.exp(-g)
    else:
        pe = 0.5 * np.exp(-np.sqrt(g))
    return float(pe) if pe.ndim == 0 else pe


def _check_frame_bits(frame_bits):
    if isinstance(frame_bits, bool) or int(frame_bits) != frame_bits or frame_bits < 1:
        raise DomainError(f"frame_bits must be a positive integer, got {frame_bits!r}")
    return int(frame_bits)


def _check_prob(p, hi, what):
    a = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(a)) or np.any(a < 0) or np.any(a > hi):
        raise DomainError(f"{what} must lie in [0, {hi}], got {p!r}")
    return a


def efficiency_function(pe, frame_bits):
    """``(1 - 2 pe) ** frame_bits``; only defined for ``0 <= pe <= 0.5``."""
    F = _check_frame_bits(frame_bits)
    a = _check_prob(pe, 0.5, "bit error probability")
    out = (1.0 - 2.0 * a) ** F
    return float(out) if out.ndim == 0 else out


def frame_success_probability(pe, frame_bits):
    """Probability that all ``frame_bits`` iid bits arrive intact: ``(1 - pe) ** F``."""
    F = _check_frame_bits(frame_bits)
    a = _check_prob(pe, 1.0, "bit error probability")
    out = (1.0 - a) ** F
    return float(out) if out.ndim == 0 else out


def frame_error_probability(pe, frame_bits):
    """``1 - (1 - pe) ** F``, the complement of :func:`frame_success_probability`."""
    return 1.0 - frame_success_probability(pe, frame_bits)
