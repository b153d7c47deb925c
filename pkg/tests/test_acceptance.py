"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary (see conftest.py).
"""
import math
import time

import numpy as np

from vmimo_game.channel import ChannelModel
from vmimo_game.energy import (
    AmplifierParams,
    AntennaConfig,
    CircuitPowerParams,
    amplifier_power,
    circuit_power,
    per_node_transmit_power,
)
from vmimo_game.equilibrium import action_set, enumerate_nash_bruteforce, find_equilibrium, payoff, verify_nash
from vmimo_game.experiments import builtin_specs, format_rows, load_spec, run_experiment
from vmimo_game.game import GameConfig, StrategyGrid, net_utility_curve, threshold_power, utility_siso, utility_vmimo
from vmimo_game.modulation import (
    ModulationScheme,
    bit_error_probability,
    db_to_linear,
    frame_error_probability,
    frame_success_probability,
)
from vmimo_game.montecarlo import random_pairs, simulate_frame_success
from vmimo_game.oracle import dense_threshold, pe_highprec

RESULTS = []


def record(label, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
    assert ok, detail


def test_ac01_ber_fidelity():
    db = np.linspace(-15, 15, 1000)
    gamma = db_to_linear(db)
    t0 = time.perf_counter()
    values = {s: bit_error_probability(s, gamma) for s in ModulationScheme}
    elapsed = time.perf_counter() - t0
    worst = 0.0
    for s, col in values.items():
        for g, v in zip(gamma, col):
            ref = pe_highprec(s, float(g))
            worst = max(worst, float(abs((v - ref) / ref)))
    at0_d = bit_error_probability("DPSK", db_to_linear(0.0))
    at0_b = bit_error_probability("BPSK", db_to_linear(0.0))
    ok = worst <= 1e-12 and at0_d == at0_b and abs(at0_d - 0.5 * math.exp(-1)) < 1e-15 \
        and elapsed < 1.0
    record("AC1 BER fidelity", ok,
           f"max rel err {worst:.2e}, Pe(0 dB) DPSK={at0_d:.6f} BPSK={at0_b:.6f}, {elapsed*1e3:.1f} ms")


def test_ac02_monotonicity():
    gamma = db_to_linear(np.linspace(-15, 15, 1000))
    ok, worst_sum = True, 0.0
    for s in ModulationScheme:
        pe = bit_error_probability(s, gamma)
        ps = frame_success_probability(pe, 40)
        fe = frame_error_probability(pe, 40)
        ok &= bool(np.all(np.diff(pe) < 0)) and bool(np.all(np.diff(ps) > 0))
        worst_sum = max(worst_sum, float(np.max(np.abs(ps + fe - 1.0))))
    ok &= worst_sum <= 1e-15
    record("AC2 monotonicity", ok, f"strict monotone all schemes: {ok}, max |success+error-1| {worst_sum:.1e}")


def test_ac03_monte_carlo():
    rng = np.random.default_rng(0)  # montecarlo CLI default seed
    t0 = time.perf_counter()
    misses = []
    for pe, F in random_pairs(20, rng):
        exact = frame_success_probability(pe, F)
        est, _ = simulate_frame_success(pe, F, 1_000_000, rng)
        se = math.sqrt(exact * (1 - exact) / 1_000_000)
        if abs(est - exact) > 3 * se:
            misses.append((pe, F, exact, est))
    elapsed = time.perf_counter() - t0
    record("AC3 Monte Carlo frame success", not misses and elapsed < 30,
           f"20 pairs x 1e6 frames, {len(misses)} outside 3 SE, {elapsed:.1f} s")


def test_ac04_energy_model():
    ones = CircuitPowerParams(*([1.0] * 8))
    c11 = circuit_power(ones, AntennaConfig(1, 1))
    c22 = circuit_power(ones, AntennaConfig(2, 2))
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        amp = AmplifierParams(rng.uniform(0.05, 1.0), rng.uniform(1.0, 10.0))
        a, p = rng.uniform(0, 10), rng.uniform(0, 1000)
        lhs, rhs = amplifier_power(a * p, amp), a * amplifier_power(p, amp)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    split = all(per_node_transmit_power(p, AntennaConfig(1, 1)) == p for p in rng.uniform(0, 100, 100))
    ok = c11 == 10.0 and c22 == 18.0 and worst <= 1e-12 and split
    record("AC4 energy model", ok, f"P_C 1x1={c11} 2x2={c22}, linearity err {worst:.1e}, split identity {split}")


def test_ac05_reduction():
    powers = np.linspace(1, 100, 1000)
    lb = GameConfig(antennas=AntennaConfig(1, 1), channel=ChannelModel.link_budget(2.95), cost_k=250.0)
    bitwise = all(utility_vmimo(float(p), lb).gross_utility == utility_siso(float(p), lb).gross_utility
                  for p in powers)
    exo = GameConfig(antennas=AntennaConfig(1, 1), channel=ChannelModel.exogenous_db(3.0))
    mimo = exo.replace(antennas=AntennaConfig(2, 2))
    worst = max(abs(utility_vmimo(float(p), mimo).gross_utility / (2 * utility_siso(float(p), exo).gross_utility) - 1)
                for p in powers)
    record("AC5 VMIMO->SISO reduction", bitwise and worst <= 1e-12,
           f"1x1 bit-for-bit {bitwise}, 2x2 vs 2xSISO rel err {worst:.1e}")


def test_ac06_net_utility_landscape(calibrated):
    t0 = time.perf_counter()
    cfg = calibrated.replace(grid=StrategyGrid.uniform(1, 100, 100))
    net = net_utility_curve(cfg.grid.as_array(), cfg)
    i = int(np.argmax(net))
    t = threshold_power(cfg)
    dense = dense_threshold(cfg, 1_000_000)
    elapsed = time.perf_counter() - t0
    ok = 0 < i < 99 and net[i] > 0 and t.power is not None and dense is not None
    if ok:
        lo, hi, step = dense
        ok = lo - step <= t.power <= hi + step
    ok = ok and elapsed < 5
    record("AC6 net-utility landscape", ok,
           f"argmax index {i} ({cfg.grid.levels[i]} mW, net {net[i]:.1f}), p_t {t.power}, "
           f"dense bracket {dense and dense[:2]}, {elapsed:.2f} s")


def _random_config(rng):
    scheme = list(ModulationScheme)[int(rng.integers(0, 3))]
    n_players = int(rng.integers(1, 3))
    n_levels = int(rng.integers(2, 101)) if n_players == 1 else int(rng.integers(2, 41))
    p_min = rng.uniform(0.5, 5)
    p_max = p_min * rng.uniform(2, 100)
    grid = (StrategyGrid.uniform(p_min, p_max, n_levels) if rng.random() < 0.5
            else StrategyGrid.geometric(p_min, p_max, n_levels))
    if rng.random() < 0.5:
        channel = ChannelModel.link_budget(rng.uniform(0.05, 5),
                                           interference=float(rng.choice([0.0, rng.uniform(0, 1)])))
    else:
        channel = ChannelModel.exogenous_db(rng.uniform(-15, 15),
                                            interference=float(rng.choice([0.0, rng.uniform(0, 1)])))
    antennas = AntennaConfig(int(rng.integers(1, 3)), int(rng.integers(1, 3)))
    k = float(10 ** rng.uniform(-1, 4))
    return GameConfig(scheme=scheme, cost_k=k, antennas=antennas, channel=channel,
                      grid=grid, n_players=n_players)


def test_ac07_equilibrium_soundness():
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    n_cfg, n_nash, n_perturbed, failures = 60, 0, 0, []
    for c in range(n_cfg):
        cfg = _random_config(rng)
        actions = action_set(cfg)
        start = tuple(actions[j] for j in rng.integers(0, len(actions), cfg.n_players))
        res = find_equilibrium(cfg, initial=start)
        if not res.is_nash:
            continue
        n_nash += 1
        if res.profile not in enumerate_nash_bruteforce(cfg):
            failures.append((c, "not in brute-force set"))
        # every unilateral perturbation to a strictly worse action must be rejected
        for i in range(cfg.n_players):
            base = res.per_player_net[i]
            for a in actions:
                if a == res.profile[i]:
                    continue
                dev = res.profile[:i] + (a,) + res.profile[i + 1:]
                # ties within 1e-12 are equilibria too; only strictly worse moves count
                if payoff(i, dev, cfg) < base - 1e-12:
                    n_perturbed += 1
                    if verify_nash(dev, cfg).is_nash:
                        failures.append((c, "perturbation accepted"))
    elapsed = time.perf_counter() - t0
    ok = not failures and n_nash >= 50 and elapsed < 60
    record("AC7 equilibrium soundness", ok,
           f"{n_cfg} configs, {n_nash} certified equilibria, {n_perturbed} perturbations rejected, "
           f"{len(failures)} failures, {elapsed:.1f} s")


def test_ac08_vmimo_benefit(calibrated, calibrated_siso):
    levels = np.arange(15.0, 51.0)
    v = net_utility_curve(levels, calibrated)
    s = net_utility_curve(levels, calibrated_siso)
    table = run_experiment(load_spec("fig7_net_utility_uniform"))
    ratio = table.metadata["summary"]["VMIMO-2x2"]["ratio_vs_reference_at_argmax"]
    ok = bool(np.all(v >= s)) and ratio is not None and ratio >= 1
    record("AC8 VMIMO benefit 15-50 mW", ok,
           f"min VMIMO-SISO gap {float(np.min(v - s)):.1f}, ratio at argmax {ratio:.4f} (in metadata)")


def test_ac09_determinism():
    names = builtin_specs()
    first = {n: format_rows(run_experiment(load_spec(n))) for n in names}
    second = {n: format_rows(run_experiment(load_spec(n))) for n in names}
    parallel = {n: format_rows(run_experiment(load_spec(n), jobs=4)) for n in names}
    ok = first == second == parallel
    record("AC9 determinism", ok, f"{len(names)} experiments identical across 2 runs and 4-thread run: {ok}")


def test_ac10_power_efficiency_shape():
    low = run_experiment(load_spec("fig4_power_efficiency_m5db"))
    high = run_experiment(load_spec("fig6_power_efficiency_p10db"))
    ok, worst = True, 0.0
    for label in ("SISO", "VMIMO-2x2"):
        for s in ModulationScheme:
            e_low = low.column(f"efficiency_{label}_{s.value}")
            e_high = high.column(f"efficiency_{label}_{s.value}")
            r = e_low[-1] / e_high[0]
            worst = max(worst, r)
            ok &= r < 1e-3 and int(np.argmax(e_high)) == 0
    record("AC10 power-efficiency shape", ok,
           f"max eff(-5 dB,100 mW)/eff(10 dB,1 mW) = {worst:.2e}; 10 dB peak at lowest power: {ok}")
