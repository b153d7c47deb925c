"""Pure-strategy Nash equilibria of the discrete power game.

Every player shares the action set ``(None,) + grid.levels`` where ``None``
is silence. Profiles are plain tuples of actions, one per player.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .game import interfering_power, net_utility

__all__ = [
    "TIE_TOL",
    "MAX_PROFILES",
    "Deviation",
    "NashCertificate",
    "EquilibriumResult",
    "action_set",
    "payoff",
    "best_response",
    "verify_nash",
    "find_equilibrium",
    "enumerate_nash_bruteforce",
    "OracleTooLarge",
]

TIE_TOL = 1e-12
MAX_PROFILES = 10**7


class OracleTooLarge(DomainError):
    def __init__(self, n_profiles, limit=MAX_PROFILES):
        self.n_profiles = n_profiles
        self.limit = limit
        super().__init__(f"{n_profiles} profiles exceeds the enumeration limit of {limit}")


@dataclass(frozen=True)
class Deviation:
    player: int
    action: Optional[float]
    better_action: Optional[float]
    gain: float


@dataclass(frozen=True)
class NashCertificate:
    is_nash: bool
    worst: Optional[Deviation]

    def __bool__(self):
        return self.is_nash


@dataclass
class EquilibriumResult:
    profile: tuple
    per_player_net: tuple
    is_nash: bool
    best_response_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    worst_deviation: Optional[Deviation] = None


def action_set(config):
    return (None,) + config.grid.levels


def validate_profile(profile, config):
    if len(profile) != config.n_players:
        raise DomainError(
            f"profile has {len(profile)} entries for {config.n_players} players"
        )
    for i, a in enumerate(profile):
        if a is not None and a not in config.grid:
            raise DomainError(f"player {i} action {a!r} is not a grid level")
    return tuple(profile)


def payoff(player, profile, config):
    """Net utility of ``player`` under ``profile``."""
    others = profile[:player] + profile[player + 1:]
    return net_utility(profile[player], config, others).net_utility


def _payoff_vector(player, profile, config):
    others = profile[:player] + profile[player + 1:]
    return [net_utility(a, config, others).net_utility for a in action_set(config)]


def _pick(values):
    # Actions are ordered silent-first, then by increasing power, so the first
    # near-maximal entry is the lowest-power one among ties.
    best = max(values)
    for j, v in enumerate(values):
        if v >= best - TIE_TOL:
            return j
    raise AssertionError("unreachable")


def best_response(player, profile, config):
    """Action maximising ``player``'s net utility with the others held fixed."""
    profile = validate_profile(profile, config)
    return action_set(config)[_pick(_payoff_vector(player, profile, config))]


def verify_nash(profile, config):
    """Check every unilateral deviation of every player.

    Returns a :class:`NashCertificate`; when the profile is not an
    equilibrium, ``worst`` is the most profitable deviation found.
    """
    profile = validate_profile(profile, config)
    actions = action_set(config)
    worst = None
    for i in range(config.n_players):
        values = _payoff_vector(i, profile, config)
        current = payoff(i, profile, config)
        j = _pick(values)
        gain = values[j] - current
        if worst is None or gain > worst.gain:
            worst = Deviation(i, profile[i], actions[j], gain)
    is_nash = worst is None or worst.gain <= TIE_TOL
    return NashCertificate(is_nash, None if is_nash else worst)


def find_equilibrium(config, initial=None, max_rounds=100):
    """Round-robin best-response iteration followed by an exhaustive check.

    Non-convergence is reported through ``converged``/``is_nash`` rather than
    raised.
    """
    if max_rounds < 1:
        raise DomainError("max_rounds must be >= 1")
    profile = list(validate_profile(
        initial if initial is not None else (None,) * config.n_players, config))
    trace = []
    converged = False
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        moved = False
        for i in range(config.n_players):
            current = tuple(profile)
            values = _payoff_vector(i, current, config)
            j = _pick(values)
            old_value = payoff(i, current, config)
            gain = values[j] - old_value
            if gain > TIE_TOL:
                new = action_set(config)[j]
                trace.append((i, profile[i], new, gain))
                profile[i] = new
                moved = True
        if not moved:
            converged = True
            break
    profile = tuple(profile)
    cert = verify_nash(profile, config)
    nets = tuple(payoff(i, profile, config) for i in range(config.n_players))
    return EquilibriumResult(
        profile=profile,
        per_player_net=nets,
        is_nash=cert.is_nash,
        best_response_trace=trace,
        iterations=rounds,
        converged=converged,
        worst_deviation=cert.worst,
    )


def enumerate_nash_bruteforce(config, max_profiles=MAX_PROFILES):
    """Every pure-strategy Nash profile, found by scoring all profiles.

    Raises :class:`OracleTooLarge` when ``(levels + 1) ** players`` exceeds
    ``max_profiles``.
    """
    actions = action_set(config)
    n, L = config.n_players, len(actions)
    total = L**n
    if total > max_profiles:
        raise OracleTooLarge(total, max_profiles)

    # payoff depends on own action and the others' summed power only
    cache = {}

    def value(a, profile, i):
        others = profile[:i] + profile[i + 1:]
        key = (a, interfering_power(others, config) if config.channel.interference else 0.0)
        if key not in cache:
            cache[key] = net_utility(a, config, others).net_utility
        return cache[key]

    tensors = np.empty((n,) + (L,) * n)
    for idx in itertools.product(range(L), repeat=n):
        profile = tuple(actions[j] for j in idx)
        for i in range(n):
            tensors[(i,) + idx] = value(profile[i], profile, i)

    stable = np.ones((L,) * n, dtype=bool)
    for i in range(n):
        best = tensors[i].max(axis=i, keepdims=True)
        stable &= tensors[i] >= best - TIE_TOL
    found = [tuple(actions[j] for j in idx) for idx in zip(*np.nonzero(stable))]
    return sorted(found, key=lambda prof: tuple(-math.inf if a is None else a for a in prof))
