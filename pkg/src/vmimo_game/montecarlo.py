"""Bit-level Monte Carlo simulation of frame delivery over a BSC."""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


def simulate_frame_success(pe, frame_bits, n_frames, rng=None, chunk=50_000):
    """Fraction of ``n_frames`` frames whose ``frame_bits`` bits all survive.

    Each bit is flipped independently with probability ``pe``. Returns
    ``(estimate, standard_error)`` where the standard error is the binomial
    one evaluated at the estimate.
    """
    if not 0 <= pe <= 1:
        raise DomainError(f"pe must lie in [0, 1], got {pe!r}")
    rng = np.random.default_rng(rng)
    ok = 0
    left = n_frames
    while left:
        n = min(chunk, left)
        flips = rng.random((n, frame_bits)) < pe
        ok += int(n - np.count_nonzero(flips.any(axis=1)))
        left -= n
    est = ok / n_frames
    return est, math.sqrt(est * (1 - est) / n_frames)


def random_pairs(n_pairs, rng=None, max_frame_bits=64):
    """Random ``(pe, F)`` pairs whose success probability is not degenerate."""
    rng = np.random.default_rng(rng)
    pairs = []
    while len(pairs) < n_pairs:
        F = int(rng.integers(1, max_frame_bits + 1))
        pe = float(rng.uniform(0.0, 0.2))
        if 1e-3 < (1 - pe) ** F < 1 - 1e-3:
            pairs.append((pe, F))
    return pairs


def validate_frame_success(n_pairs=20, n_frames=1_000_000, seed=0, n_sigma=3.0):
    """Compare closed-form frame success with simulation on random pairs.

    Yields ``(pe, F, closed_form, estimate, standard_error, agrees)``.
    """
    from .modulation import frame_success_probability

    rng = np.random.default_rng(seed)
    for pe, F in random_pairs(n_pairs, rng):
        exact = frame_success_probability(pe, F)
        est, _ = simulate_frame_success(pe, F, n_frames, rng)
        se = math.sqrt(exact * (1 - exact) / n_frames)
        yield pe, F, exact, est, se, abs(est - exact) <= n_sigma * se
