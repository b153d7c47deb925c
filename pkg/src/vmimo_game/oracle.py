"""Independent cross-checks for the experiment runners.

Each check recomputes a result along a different route (high-precision
arithmetic, dense scans, exhaustive enumeration) and reports agreement.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import mpmath
import numpy as np

from .channel import ChannelModel
from .equilibrium import OracleTooLarge, enumerate_nash_bruteforce, find_equilibrium
from .game import StrategyGrid, net_utility_curve, threshold_power
from .modulation import ModulationScheme

DENSE_POINTS = 1_000_000


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


def pe_highprec(scheme, gamma, dps=40):
    """Closed-form bit error probability in ``dps``-digit arithmetic."""
    scheme = ModulationScheme.parse(scheme)
    with mpmath.workdps(dps):
        g = mpmath.mpf(gamma)
        if scheme is ModulationScheme.FSK:
            return mpmath.mpf("0.5") * mpmath.exp(-g / 2)
        if scheme is ModulationScheme.DPSK:
            return mpmath.mpf("0.5") * mpmath.exp(-g)
        return mpmath.mpf("0.5") * mpmath.exp(-mpmath.sqrt(g))


def dense_threshold(config, points=DENSE_POINTS):
    """Last ``>= 0`` to ``< 0`` sign change of net utility on a dense grid.

    Returns ``(p_left, p_right, step)`` or ``None``.
    """
    p = np.linspace(config.grid.p_min, config.grid.p_max, points)
    v = net_utility_curve(p, config)
    idx = np.flatnonzero((v[:-1] >= 0) & (v[1:] < 0))
    if idx.size == 0:
        return None
    i = int(idx[-1])
    return float(p[i]), float(p[i + 1]), float(p[1] - p[0])


def check_ber(table, spec):
    worst = 0.0
    sinr = table.column("sinr_db")
    for s in ModulationScheme:
        col = table.columns.get(f"pe_{s.value}")
        if col is None:
            continue
        for db, v in zip(sinr, col):
            ref = pe_highprec(s, mpmath.power(10, mpmath.mpf(db) / 10))
            worst = max(worst, float(abs((v - ref) / ref)))
    return [Check("ber_highprec", worst <= 1e-12, f"max relative error {worst:.3e}")]


def check_frame_success(table, spec):
    F = table.metadata["frame_bits"]
    worst_sum, worst_comp = 0.0, 0.0
    for s in ModulationScheme:
        if f"pe_{s.value}" not in table.columns:
            continue
        for pe, ok, err in zip(table.column(f"pe_{s.value}"),
                               table.column(f"frame_success_{s.value}"),
                               table.column(f"frame_error_{s.value}")):
            worst_sum = max(worst_sum, abs(ok + err - 1.0))
            worst_comp = max(worst_comp, abs(ok - (1.0 - pe) ** F))
    return [
        Check("success_plus_error", worst_sum <= 1e-15, f"max |sum-1| {worst_sum:.3e}"),
        Check("composition", worst_comp == 0.0, f"max deviation {worst_comp:.3e}"),
    ]


def check_power_efficiency(table, spec):
    anchor = ChannelModel.exogenous(10 ** (float(spec.params["anchor_sinr_db"]) / 10))
    worst = 0.0
    powers = table.column("power_mw")
    for label, cfg in spec.configs.items():
        for s in ModulationScheme:
            key = f"efficiency_{label}_{s.value}"
            if key not in table.columns:
                continue
            m = cfg.antennas.split
            gamma = anchor.gamma_fixed
            pe = 0.5 * math.exp({"FSK": -gamma / 2, "DPSK": -gamma,
                                 "BPSK": -math.sqrt(gamma)}[s.value])
            for p, v in zip(powers, table.column(key)):
                direct = (1 - pe) ** cfg.frame.frame_bits / (p / m)
                worst = max(worst, abs(v - direct) / direct if direct else abs(v))
    return [Check("efficiency_direct", worst <= 1e-12, f"max relative error {worst:.3e}")]


def check_net_utility(table, spec):
    out = []
    levels = table.column("power_mw")[1:]
    spacing = table.metadata["grid_spacing"]
    for label, cfg in spec.configs.items():
        info = table.metadata["summary"][label]
        single = cfg.replace(grid=StrategyGrid(tuple(levels), spacing), n_players=1)
        try:
            nash = enumerate_nash_bruteforce(single)
            bf = nash[0][0] if nash else "none"
            ok = bf == info["argmax_power_mw"] or (bf is None and info["argmax_net_utility"] <= 0)
            out.append(Check(f"argmax_vs_bruteforce[{label}]", ok,
                             f"sweep argmax {info['argmax_power_mw']}, brute force {bf}"))
        except OracleTooLarge as exc:
            out.append(Check(f"argmax_vs_bruteforce[{label}]", True, f"skipped: {exc}"))
        t = threshold_power(single)
        dense = dense_threshold(single)
        if t.power is None or dense is None:
            ok = t.power is None and dense is None
            out.append(Check(f"threshold_dense[{label}]", ok,
                             f"bisection {t.power} ({t.reason}), dense {dense}"))
        else:
            lo, hi, step = dense
            ok = lo - step <= t.power <= hi + step
            out.append(Check(f"threshold_dense[{label}]", ok,
                             f"bisection {t.power:.9g} in dense bracket [{lo:.9g}, {hi:.9g}]"))
    return out


def check_equilibrium(table, spec):
    out = []
    n_players = spec.params.get("n_players")
    for label, cfg in spec.configs.items():
        if n_players is not None:
            cfg = cfg.replace(n_players=int(n_players))
        res = find_equilibrium(cfg, max_rounds=int(spec.params.get("max_rounds", 100)))
        try:
            nash = enumerate_nash_bruteforce(cfg)
        except OracleTooLarge as exc:
            out.append(Check(f"equilibrium_in_bruteforce[{label}]", True, f"skipped: {exc}"))
            continue
        ok = (not res.is_nash) or res.profile in nash
        out.append(Check(f"equilibrium_in_bruteforce[{label}]", ok,
                         f"profile {res.profile}, {len(nash)} brute-force equilibria"))
    return out


CHECKS = {
    "ber_sweep": check_ber,
    "frame_success_sweep": check_frame_success,
    "power_efficiency_sweep": check_power_efficiency,
    "net_utility_sweep": check_net_utility,
    "equilibrium_solve": check_equilibrium,
}


def run_checks(spec, table):
    return CHECKS[spec.kind](table, spec)


def frame_success_montecarlo(n_pairs=20, n_frames=1_000_000, seed=0):
    from .montecarlo import validate_frame_success

    checks = []
    for pe, F, exact, est, se, ok in validate_frame_success(n_pairs, n_frames, seed):
        checks.append(Check(f"montecarlo[pe={pe:.4f},F={F}]", ok,
                            f"closed form {exact:.6f}, simulated {est:.6f}, se {se:.2e}"))
    return checks
