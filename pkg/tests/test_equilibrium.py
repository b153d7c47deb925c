import itertools

import numpy as np
import pytest

from vmimo_game.channel import ChannelModel
from vmimo_game.energy import AntennaConfig
from vmimo_game.equilibrium import (
    OracleTooLarge,
    action_set,
    best_response,
    enumerate_nash_bruteforce,
    find_equilibrium,
    payoff,
    verify_nash,
)
from vmimo_game.errors import DomainError
from vmimo_game.game import GameConfig, StrategyGrid, net_utility


def grid_argmax(cfg):
    """Lowest-power maximiser of net utility over silence + grid, by direct scan."""
    best, best_v = None, 0.0
    for p in cfg.grid.levels:
        v = net_utility(p, cfg).net_utility
        if v > best_v + 1e-12:
            best, best_v = p, v
    return best


def test_best_response_silent_when_everything_loses():
    cfg = GameConfig(cost_k=1e12, grid=StrategyGrid.uniform(1, 10, 10))
    assert best_response(0, (None,), cfg) is None


def test_best_response_pmin_without_cost():
    cfg = GameConfig(channel=ChannelModel.exogenous_db(15), grid=StrategyGrid.uniform(1, 10, 10))
    assert best_response(0, (None,), cfg) == 1.0


def test_best_response_equals_scan(calibrated):
    assert best_response(0, (None,), calibrated) == grid_argmax(calibrated) == 13.0


def test_best_response_idempotent(calibrated):
    cfg = calibrated.replace(n_players=2, grid=StrategyGrid.uniform(1, 100, 30))
    first = best_response(0, (None, 100.0), cfg)
    assert best_response(0, (first, 100.0), cfg) == first


def test_tie_goes_to_lower_power():
    # exogenous, k=0: gross ~ 1/p, so flatten with identical levels is impossible;
    # construct a tie with silence instead: k such that net(p_min) == 0 exactly
    cfg = GameConfig(channel=ChannelModel.exogenous(1e5), scheme="DPSK",
                     antennas=AntennaConfig(1, 1), grid=StrategyGrid((4.0, 8.0)))
    k = net_utility(4.0, cfg).gross_utility / 4.0
    tied = cfg.replace(cost_k=k)
    assert net_utility(4.0, tied).net_utility == 0.0
    assert best_response(0, (None,), tied) is None


def test_single_player_equilibrium(calibrated):
    res = find_equilibrium(calibrated)
    assert res.is_nash and res.converged
    assert res.profile == (grid_argmax(calibrated),)
    assert res.iterations == 2  # one improving round, one confirming round


def test_decoupled_players_all_pick_argmax(calibrated):
    cfg = calibrated.replace(n_players=4, grid=StrategyGrid.uniform(1, 100, 40))
    res = find_equilibrium(cfg)
    target = grid_argmax(cfg)
    assert res.profile == (target,) * 4
    assert all(step[2] == target for step in res.best_response_trace)
    assert len(res.best_response_trace) == 4


def test_zero_cost_all_at_pmin():
    cfg = GameConfig(channel=ChannelModel.exogenous_db(10), n_players=3,
                     grid=StrategyGrid.uniform(1, 100, 100))
    assert find_equilibrium(cfg).profile == (1.0, 1.0, 1.0)


def test_trace_gains_positive_and_monotone():
    cfg = GameConfig(channel=ChannelModel.link_budget(2.0, interference=0.3), cost_k=100.0,
                     n_players=3, grid=StrategyGrid.uniform(1, 60, 12))
    res = find_equilibrium(cfg, initial=(60.0, 60.0, 60.0))
    assert res.best_response_trace
    for player, old, new, gain in res.best_response_trace:
        assert gain > 0


def test_max_rounds_validated(calibrated):
    with pytest.raises(DomainError):
        find_equilibrium(calibrated, max_rounds=0)


def test_nonconvergence_reported_in_band(calibrated):
    cfg = calibrated.replace(n_players=2, grid=StrategyGrid.uniform(1, 100, 20))
    res = find_equilibrium(cfg, max_rounds=1)
    assert not res.converged
    assert res.iterations == 1


def test_verify_nash_detects_deviation(calibrated):
    res = find_equilibrium(calibrated)
    assert verify_nash(res.profile, calibrated)
    cert = verify_nash((50.0,), calibrated)
    assert not cert.is_nash
    assert cert.worst.better_action == res.profile[0]
    assert cert.worst.gain > 0


def test_verify_rejects_off_grid(calibrated):
    with pytest.raises(DomainError):
        verify_nash((13.5,), calibrated)


def test_bruteforce_single_player():
    cfg = GameConfig(channel=ChannelModel.link_budget(2.95), cost_k=250.0,
                     grid=StrategyGrid((5.0, 10.0, 13.0, 20.0, 40.0)))
    assert enumerate_nash_bruteforce(cfg) == [(grid_argmax(cfg),)]


def test_bruteforce_product_when_decoupled(calibrated):
    cfg = calibrated.replace(n_players=2, grid=StrategyGrid.uniform(1, 100, 25))
    a = grid_argmax(cfg)
    assert enumerate_nash_bruteforce(cfg) == [(a, a)]


def test_bruteforce_all_silent():
    cfg = GameConfig(cost_k=1e12, n_players=2, grid=StrategyGrid.uniform(1, 10, 5))
    assert enumerate_nash_bruteforce(cfg) == [(None, None)]


def test_bruteforce_refuses_large():
    cfg = GameConfig(n_players=4, grid=StrategyGrid.uniform(1, 100, 100))
    with pytest.raises(OracleTooLarge):
        enumerate_nash_bruteforce(cfg)


def naive_nash_set(cfg):
    """Textbook definition over the full profile space, no caching or tensors."""
    actions = action_set(cfg)
    out = []
    for prof in itertools.product(actions, repeat=cfg.n_players):
        ok = True
        for i in range(cfg.n_players):
            u = payoff(i, prof, cfg)
            for a in actions:
                dev = prof[:i] + (a,) + prof[i + 1:]
                if payoff(i, dev, cfg) > u + 1e-12:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(prof)
    return sorted(out, key=lambda p: tuple(-1 if a is None else a for a in p))


@pytest.mark.parametrize("interference", [0.0, 0.2, 2.0])
def test_bruteforce_matches_definition(interference):
    cfg = GameConfig(channel=ChannelModel.link_budget(2.0, interference=interference),
                     cost_k=300.0, n_players=2, grid=StrategyGrid.uniform(2, 40, 8))
    assert enumerate_nash_bruteforce(cfg) == naive_nash_set(cfg)


def test_verify_agrees_with_enumeration_two_players_100_levels(calibrated):
    cfg = calibrated.replace(n_players=2)
    nash = set(enumerate_nash_bruteforce(cfg))
    actions = action_set(cfg)
    rng = np.random.default_rng(5)
    sample = [tuple(actions[j] for j in rng.integers(0, len(actions), 2)) for _ in range(200)]
    sample += list(nash)
    for prof in sample:
        assert verify_nash(prof, cfg).is_nash == (prof in nash)


def test_deterministic(calibrated):
    cfg = calibrated.replace(n_players=3, grid=StrategyGrid.uniform(1, 100, 30),
                             channel=ChannelModel.link_budget(2.95, interference=0.05))
    a = find_equilibrium(cfg, initial=(100.0, 1.0, 100.0))
    b = find_equilibrium(cfg, initial=(100.0, 1.0, 100.0))
    assert a == b
