"""YAML configuration: Table-1 defaults, overlays, ``--set`` overrides.

A game configuration file is a mapping with the keys shown in
``data/default.yaml``. SNRs may be given in dB (``gamma_db``) or linear
(``gamma``); the resolved snapshot always stores linear values so that
reloading it is exact.
"""
from __future__ import annotations

import copy
from importlib import resources
from pathlib import Path

import yaml

from .channel import ChannelMode, ChannelModel
from .energy import AmplifierParams, AntennaConfig, CircuitPowerParams
from .errors import ConfigError, DomainError
from .game import GameConfig, Spacing, StrategyGrid
from .modulation import FrameFormat, ModulationScheme

__all__ = [
    "load_yaml",
    "builtin_path",
    "default_config_dict",
    "deep_merge",
    "apply_override",
    "parse_override",
    "config_from_dict",
    "config_to_dict",
    "default_config",
]

DATA = resources.files(__package__) / "data"

_TOP_KEYS = {
    "frame", "scheme", "cost_k", "antennas", "channel", "grid", "n_players",
    "branch_rates_bps", "amplifier", "circuit", "sinr_range_db",
}


def load_yaml(path):
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read file ({exc.strerror})") from None
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(str(path), "top level must be a mapping")
    return data


def builtin_path(name, kind="config"):
    """Path of a bundled config (``kind='config'``) or experiment spec."""
    base = DATA if kind == "config" else DATA / "specs"
    return Path(str(base / f"{name}.yaml"))


def default_config_dict():
    return load_yaml(builtin_path("default"))


def deep_merge(base, overlay):
    out = copy.deepcopy(base)
    for key, value in (overlay or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def parse_override(text):
    """Split ``key.path=value`` into ``(["key", "path"], parsed_value)``."""
    if "=" not in text:
        raise ConfigError(text, "override must look like key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(text, "empty override key")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError:
        value = raw
    return key.split("."), value


def apply_override(data, path, value):
    out = copy.deepcopy(data)
    node = out
    for part in path[:-1]:
        nxt = node.get(part)
        if not isinstance(nxt, dict):
            nxt = {}
            node[part] = nxt
        node = nxt
    node[path[-1]] = value
    return out


def _section(d, key, where):
    v = d.get(key, {})
    if v is None:
        return {}
    if not isinstance(v, dict):
        raise ConfigError(f"{where}{key}", "must be a mapping")
    return v


def _number(d, key, where, default=None, cast=float):
    if key not in d or d[key] is None:
        if default is None:
            raise ConfigError(f"{where}{key}", "is required")
        return default
    v = d[key]
    if isinstance(v, bool):
        raise ConfigError(f"{where}{key}", f"expected a number, got {v!r}")
    try:
        out = cast(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}{key}", f"expected a number, got {v!r}") from None
    if cast is int and out != v:
        raise ConfigError(f"{where}{key}", f"expected an integer, got {v!r}")
    return out


def _build(where, factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except (DomainError, ValueError, TypeError) as exc:
        raise ConfigError(where, str(exc)) from None


def grid_from_dict(g, where="grid."):
    spacing = str(g.get("spacing", "uniform")).lower()
    if spacing not in {s.value for s in Spacing}:
        raise ConfigError(f"{where}spacing", f"unknown spacing {spacing!r}")
    if spacing == "explicit":
        levels = g.get("levels")
        if not isinstance(levels, list):
            raise ConfigError(f"{where}levels", "explicit grid needs a list of levels")
        return _build(f"{where}levels", StrategyGrid, tuple(levels), Spacing.EXPLICIT)
    p_min = _number(g, "p_min_mw", where, 1.0)
    p_max = _number(g, "p_max_mw", where, 100.0)
    n = _number(g, "levels", where, 100, int)
    if not (0 < p_min < p_max):
        raise ConfigError(f"{where}p_min_mw", "need 0 < p_min_mw < p_max_mw")
    if n < 2:
        raise ConfigError(f"{where}levels", "need at least 2 levels")
    make = StrategyGrid.uniform if spacing == "uniform" else StrategyGrid.geometric
    grid = make(p_min, p_max, n)
    return grid


def channel_from_dict(c, where="channel."):
    mode = str(c.get("mode", "link_budget")).lower()
    if mode not in {m.value for m in ChannelMode}:
        raise ConfigError(f"{where}mode", f"unknown channel mode {mode!r}")
    interference = _number(c, "interference", where, 0.0)
    if mode == ChannelMode.EXOGENOUS.value:
        if c.get("gamma") is not None:
            gamma = _number(c, "gamma", where)
        elif c.get("gamma_db") is not None:
            gamma = 10.0 ** (_number(c, "gamma_db", where) / 10.0)
        else:
            raise ConfigError(f"{where}gamma_db", "exogenous channel needs gamma or gamma_db")
        return _build(f"{where}gamma", ChannelModel.exogenous, gamma, interference)
    if c.get("gain") is not None:
        return _build(f"{where}gain", ChannelModel.link_budget,
                      _number(c, "gain", where), interference)
    ref = c.get("reference")
    if isinstance(ref, dict):
        w = f"{where}reference."
        p_ref = _number(ref, "p_mw", w)
        if ref.get("gamma") is not None:
            g_ref = _number(ref, "gamma", w)
        else:
            g_ref = 10.0 ** (_number(ref, "gamma_db", w) / 10.0)
        return _build(f"{where}reference", ChannelModel.from_reference, p_ref, g_ref, interference)
    raise ConfigError(f"{where}gain", "link_budget channel needs gain or reference")


def config_from_dict(d, where=""):
    """Build a :class:`GameConfig` from a (fully merged) mapping."""
    if not isinstance(d, dict):
        raise ConfigError(where.rstrip("."), "config must be a mapping")
    unknown = set(d) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"{where}{sorted(unknown)[0]}", "unknown key")
    fr = _section(d, "frame", where)
    w = f"{where}frame."
    frame = _build(where + "frame", FrameFormat,
                   _number(fr, "info_bits", w, 32, int),
                   _number(fr, "frame_bits", w, 40, int),
                   _number(fr, "rate_bps", w, 1.0e6))
    try:
        scheme = ModulationScheme.parse(d.get("scheme", "BPSK"))
    except ValueError as exc:
        raise ConfigError(f"{where}scheme", str(exc)) from None
    ant = _section(d, "antennas", where)
    w = f"{where}antennas."
    antennas = _build(where + "antennas", AntennaConfig,
                      _number(ant, "n_tx", w, 2, int), _number(ant, "n_rx", w, 2, int))
    amp = _section(d, "amplifier", where)
    w = f"{where}amplifier."
    amplifier = _build(where + "amplifier", AmplifierParams,
                       _number(amp, "drain_efficiency", w, 1.0),
                       _number(amp, "peak_to_average", w, 1.0))
    circ = _section(d, "circuit", where)
    w = f"{where}circuit."
    circuit = _build(where + "circuit", CircuitPowerParams,
                     **{k: _number(circ, k, w, 0.0) for k in circ})
    channel = channel_from_dict(_section(d, "channel", where), f"{where}channel.")
    grid = grid_from_dict(_section(d, "grid", where), f"{where}grid.")
    rates = d.get("branch_rates_bps")
    if rates is not None and not isinstance(rates, list):
        raise ConfigError(f"{where}branch_rates_bps", "must be a list")
    return _build(
        where.rstrip(".") or "config",
        GameConfig,
        frame=frame,
        scheme=scheme,
        cost_k=_number(d, "cost_k", where, 0.0),
        antennas=antennas,
        channel=channel,
        grid=grid,
        n_players=_number(d, "n_players", where, 1, int),
        branch_rates=tuple(rates) if rates is not None else None,
        amplifier=amplifier,
        circuit=circuit,
    )


def config_to_dict(cfg):
    """Inverse of :func:`config_from_dict`; reloading reproduces ``cfg`` exactly."""
    ch = cfg.channel
    if ch.mode is ChannelMode.EXOGENOUS:
        channel = {"mode": ch.mode.value, "gamma": ch.gamma_fixed}
    else:
        channel = {"mode": ch.mode.value, "gain": ch.gain}
    channel["interference"] = ch.interference
    grid = cfg.grid
    if grid.spacing is Spacing.EXPLICIT:
        g = {"spacing": "explicit", "levels": list(grid.levels)}
    else:
        g = {"spacing": grid.spacing.value, "p_min_mw": grid.p_min,
             "p_max_mw": grid.p_max, "levels": len(grid)}
    return {
        "frame": {"info_bits": cfg.frame.info_bits, "frame_bits": cfg.frame.frame_bits,
                  "rate_bps": cfg.frame.rate_bps},
        "scheme": cfg.scheme.value,
        "cost_k": cfg.cost_k,
        "antennas": {"n_tx": cfg.antennas.n_tx, "n_rx": cfg.antennas.n_rx},
        "channel": channel,
        "grid": g,
        "n_players": cfg.n_players,
        "branch_rates_bps": list(cfg.branch_rates) if cfg.branch_rates else None,
        "amplifier": {"drain_efficiency": cfg.amplifier.drain_efficiency,
                      "peak_to_average": cfg.amplifier.peak_to_average},
        "circuit": {k: getattr(cfg.circuit, k) for k in (
            "p_dac", "p_mix", "p_filt_tx", "p_synth", "p_lna", "p_ifa", "p_filt_rx", "p_adc")},
    }


def default_config(**overlay):
    """The shipped Table-1 configuration with the calibrated link budget."""
    return config_from_dict(deep_merge(default_config_dict(), overlay))
