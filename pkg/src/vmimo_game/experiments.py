"""Experiment specs, sweep runners and CSV output.

An experiment spec is a YAML mapping::

    name: fig2_ber
    kind: ber_sweep
    base: default            # bundled config name, a path, or none
    overrides: {...}         # merged into the base for every label
    sweep: {variable: sinr_db, start: -15, stop: 15, points: 301, scale: linear}
    configs:                 # label -> overlay on the base
      SISO: {antennas: {n_tx: 1, n_rx: 1}}
      VMIMO-2x2: {}
    params: {...}            # kind specific
    output: fig2_ber.csv

Runs are deterministic; the only non-reproducible field is the timestamp in
the metadata header.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    apply_override,
    builtin_path,
    config_from_dict,
    config_to_dict,
    deep_merge,
    default_config_dict,
    load_yaml,
)
from .equilibrium import (
    OracleTooLarge,
    enumerate_nash_bruteforce,
    find_equilibrium,
)
from .errors import ConfigError
from .game import (
    StrategyGrid,
    expected_power_efficiency,
    net_utility,
    power_budget,
    threshold_power,
)
from .channel import ChannelModel
from .modulation import (
    ModulationScheme,
    bit_error_probability,
    db_to_linear,
    efficiency_function,
    frame_error_probability,
    frame_success_probability,
)

__all__ = [
    "KINDS",
    "Sweep",
    "ExperimentSpec",
    "ResultTable",
    "load_spec",
    "spec_from_dict",
    "run_experiment",
    "run_ber_sweep",
    "run_frame_success_sweep",
    "run_power_efficiency_sweep",
    "run_net_utility_sweep",
    "run_equilibrium_solve",
    "write_table",
    "read_table",
    "builtin_specs",
]

KINDS = (
    "ber_sweep",
    "frame_success_sweep",
    "power_efficiency_sweep",
    "net_utility_sweep",
    "equilibrium_solve",
)
SWEEP_VARIABLE = {
    "ber_sweep": "sinr_db",
    "frame_success_sweep": "sinr_db",
    "power_efficiency_sweep": "power_mw",
    "net_utility_sweep": "power_mw",
}
SCHEMES = tuple(ModulationScheme)


@dataclass(frozen=True)
class Sweep:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def as_dict(self):
        return {"variable": self.variable, "start": self.start, "stop": self.stop,
                "points": self.points, "scale": self.scale}


@dataclass
class ExperimentSpec:
    name: str
    kind: str
    configs: dict
    sweep: Sweep | None = None
    params: dict = field(default_factory=dict)
    output: str | None = None

    def snapshot(self):
        """Fully resolved spec; loading it again reproduces this spec."""
        return {
            "name": self.name,
            "kind": self.kind,
            "base": None,
            "sweep": self.sweep.as_dict() if self.sweep else None,
            "params": self.params,
            "configs": {k: config_to_dict(v) for k, v in self.configs.items()},
            "output": self.output,
        }


@dataclass
class ResultTable:
    columns: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns have unequal lengths {sorted(lengths)}")

    def __len__(self):
        return len(next(iter(self.columns.values()), []))

    def column(self, name):
        return self.columns[name]

    def rows(self):
        return list(zip(*self.columns.values()))


# -- spec parsing -------------------------------------------------------------

def _base_dict(base, spec_dir):
    if base is None or str(base).lower() == "none":
        return {}
    default = default_config_dict()
    if str(base) == "default":
        return default
    candidate = builtin_path(str(base))
    if not candidate.exists():
        candidate = Path(base)
        if not candidate.is_absolute() and spec_dir is not None:
            candidate = Path(spec_dir) / candidate
        if not candidate.exists():
            raise ConfigError("base", f"no bundled config or file named {base!r}")
    return deep_merge(default, load_yaml(candidate))


def _parse_sweep(s, kind):
    if not isinstance(s, dict):
        raise ConfigError("sweep", "must be a mapping")
    variable = s.get("variable", SWEEP_VARIABLE[kind])
    if variable != SWEEP_VARIABLE[kind]:
        raise ConfigError("sweep.variable",
                          f"{kind} sweeps {SWEEP_VARIABLE[kind]!r}, got {variable!r}")
    try:
        start, stop = float(s["start"]), float(s["stop"])
        points = s.get("points", 2)
    except KeyError as exc:
        raise ConfigError(f"sweep.{exc.args[0]}", "is required") from None
    except (TypeError, ValueError):
        raise ConfigError("sweep.start", "start/stop must be numbers") from None
    if isinstance(points, bool) or not isinstance(points, int) or points < 1:
        raise ConfigError("sweep.points", f"must be a positive integer, got {points!r}")
    scale = str(s.get("scale", "linear")).lower()
    if scale not in ("linear", "log"):
        raise ConfigError("sweep.scale", f"must be linear or log, got {scale!r}")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError("sweep.start", "bounds must be finite")
    if points == 1 and start != stop:
        raise ConfigError("sweep.points", "a single point needs start == stop")
    if points >= 2 and not start < stop:
        raise ConfigError("sweep.stop", "must exceed sweep.start")
    if variable == "power_mw" and start <= 0:
        raise ConfigError("sweep.start", "transmit power must be > 0 mW")
    if scale == "log" and start <= 0:
        raise ConfigError("sweep.start", "log sweeps need start > 0")
    return Sweep(variable, start, stop, points, scale)


def spec_from_dict(raw, overrides=(), spec_dir=None):
    """Resolve a raw spec mapping, applying ``key=value`` style ``overrides``.

    ``overrides`` is a list of ``(path_list, value)`` pairs. Paths starting
    with ``sweep``, ``params``, ``name`` or ``output`` edit the spec; all
    others edit every labelled config.
    """
    if not isinstance(raw, dict):
        raise ConfigError("", "spec must be a mapping")
    raw = dict(raw)
    cfg_overrides = []
    for path, value in overrides:
        if path[0] in ("sweep", "params", "name", "output"):
            raw = apply_override(raw, path, value)
        else:
            cfg_overrides.append((path, value))

    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise ConfigError("name", "must be a non-empty string")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ConfigError("kind", f"must be one of {list(KINDS)}, got {kind!r}")
    params = raw.get("params") or {}
    if not isinstance(params, dict):
        raise ConfigError("params", "must be a mapping")

    base = deep_merge(_base_dict(raw.get("base", "default"), spec_dir),
                      raw.get("overrides") or {})
    overlays = raw.get("configs") or {"default": {}}
    if not isinstance(overlays, dict):
        raise ConfigError("configs", "must be a mapping of label -> overlay")
    configs = {}
    for label, overlay in overlays.items():
        label = str(label)
        if label in configs:
            raise ConfigError(f"configs.{label}", "duplicate label")
        merged = deep_merge(base, overlay or {})
        for path, value in cfg_overrides:
            merged = apply_override(merged, path, value)
        configs[label] = config_from_dict(merged, f"configs.{label}.")

    sweep = None
    if kind != "equilibrium_solve":
        sweep_raw = raw.get("sweep")
        if sweep_raw is None:
            sweep_raw = _default_sweep(kind, base)
        sweep = _parse_sweep(sweep_raw, kind)
    if kind == "power_efficiency_sweep":
        if "anchor_sinr_db" not in params:
            raise ConfigError("params.anchor_sinr_db", "is required for power efficiency")
        try:
            float(params["anchor_sinr_db"])
        except (TypeError, ValueError):
            raise ConfigError("params.anchor_sinr_db", "must be a number") from None
    for key in ("schemes",):
        for s in params.get(key, []) or []:
            try:
                ModulationScheme.parse(s)
            except ValueError as exc:
                raise ConfigError(f"params.{key}", str(exc)) from None
    ref = params.get("reference_label")
    if ref is not None and ref not in configs:
        raise ConfigError("params.reference_label", f"no config labelled {ref!r}")
    output = raw.get("output") or f"{name}.csv"
    return ExperimentSpec(name, kind, configs, sweep, params, output)


def _default_sweep(kind, base):
    if SWEEP_VARIABLE[kind] == "sinr_db":
        lo, hi = base.get("sinr_range_db", [-15.0, 15.0])
        return {"variable": "sinr_db", "start": lo, "stop": hi, "points": 301}
    g = base.get("grid", {})
    return {"variable": "power_mw", "start": g.get("p_min_mw", 1.0),
            "stop": g.get("p_max_mw", 100.0), "points": g.get("levels", 100)}


def load_spec(path_or_name, overrides=()):
    """Load a spec file, a resolved JSON sidecar, or a bundled spec by name."""
    p = Path(path_or_name)
    if not p.exists():
        bundled = builtin_path(str(path_or_name), kind="spec")
        if not bundled.exists():
            raise ConfigError(str(path_or_name), "no such spec file or bundled spec")
        p = bundled
    if p.suffix == ".json":
        try:
            raw = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(str(p), f"cannot load JSON ({exc})") from None
        raw = raw.get("spec", raw)
    else:
        raw = load_yaml(p)
    return spec_from_dict(raw, overrides, spec_dir=p.parent)


def builtin_specs():
    specs = builtin_path("x", kind="spec").parent
    return sorted(q.stem for q in specs.glob("*.yaml"))


# -- runners ------------------------------------------------------------------

def _map(fn, items, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _first_config(spec):
    return next(iter(spec.configs.values()))


def _schemes(spec):
    names = spec.params.get("schemes")
    return tuple(ModulationScheme.parse(s) for s in names) if names else SCHEMES


def _finish(spec, columns, extra=None):
    meta = {
        "experiment": spec.name,
        "kind": spec.kind,
        "tool_version": __version__,
    }
    meta.update(extra or {})
    return ResultTable(columns, meta)


def run_ber_sweep(spec, jobs=1):
    """Bit-error probability of every scheme against SINR in dB."""
    schemes = _schemes(spec)
    sinr_db = [float(x) for x in spec.sweep.values()]

    def row(db):
        gamma = db_to_linear(db)
        return tuple(bit_error_probability(s, gamma) for s in schemes)

    rows = _map(row, sinr_db, jobs)
    columns = {"sinr_db": sinr_db}
    for j, s in enumerate(schemes):
        columns[f"pe_{s.value}"] = [r[j] for r in rows]
    return _finish(spec, columns)


def run_frame_success_sweep(spec, jobs=1):
    """Frame success and its complement per scheme against SINR in dB."""
    schemes = _schemes(spec)
    frame_bits = _first_config(spec).frame.frame_bits
    sinr_db = [float(x) for x in spec.sweep.values()]

    def row(db):
        gamma = db_to_linear(db)
        out = []
        for s in schemes:
            pe = bit_error_probability(s, gamma)
            out += [pe, frame_success_probability(pe, frame_bits),
                    frame_error_probability(pe, frame_bits),
                    efficiency_function(pe, frame_bits)]
        return tuple(out)

    rows = _map(row, sinr_db, jobs)
    columns = {"sinr_db": sinr_db}
    for j, s in enumerate(schemes):
        for k, what in enumerate(("pe", "frame_success", "frame_error", "efficiency_f")):
            columns[f"{what}_{s.value}"] = [r[4 * j + k] for r in rows]
    return _finish(spec, columns, {"frame_bits": frame_bits})


def run_power_efficiency_sweep(spec, jobs=1):
    """Expected power efficiency against transmit power at a fixed SINR."""
    anchor_db = float(spec.params["anchor_sinr_db"])
    schemes = _schemes(spec)
    channel = ChannelModel.exogenous(db_to_linear(anchor_db))
    powers = [float(x) for x in spec.sweep.values()]
    series = [(label, s, cfg.replace(channel=channel, scheme=s))
              for label, cfg in spec.configs.items() for s in schemes]

    def row(p):
        out = []
        for _, _, cfg in series:
            rep = expected_power_efficiency(p, cfg)
            out += [rep.efficiency, rep.expected_transmissions]
        return tuple(out)

    rows = _map(row, powers, jobs)
    columns = {"power_mw": powers}
    for j, (label, s, _) in enumerate(series):
        eff = [r[2 * j] for r in rows]
        peak = max(eff)
        columns[f"efficiency_{label}_{s.value}"] = eff
        columns[f"normalized_{label}_{s.value}"] = [e / peak if peak > 0 else 0.0 for e in eff]
        columns[f"expected_tx_{label}_{s.value}"] = [r[2 * j + 1] for r in rows]
    return _finish(spec, columns, {"anchor_sinr_db": anchor_db})


def _reference_label(spec):
    ref = spec.params.get("reference_label")
    if ref is None:
        ref = "SISO" if "SISO" in spec.configs else next(iter(spec.configs))
    return ref


def run_net_utility_sweep(spec, jobs=1):
    """Net utility over a discrete power grid, one column per config label.

    The first row is the silent action. Metadata carries each label's grid
    argmax, threshold power and the improvement over the reference label.
    """
    levels = [float(x) for x in spec.sweep.values()]
    spacing = "geometric" if spec.sweep.scale == "log" else "uniform"
    configs = {label: cfg.replace(grid=StrategyGrid(tuple(levels), spacing))
               for label, cfg in spec.configs.items()}
    labels = list(configs)

    def row(p):
        out = []
        for label in labels:
            rep = net_utility(p, configs[label])
            out += [rep.net_utility, rep.gross_utility, power_budget(p, configs[label])[2]]
        return tuple(out)

    rows = _map(row, levels, jobs)
    columns = {"action": ["silent"] + ["transmit"] * len(levels),
               "power_mw": [0.0] + levels}
    for j, label in enumerate(labels):
        columns[f"net_{label}"] = [0.0] + [r[3 * j] for r in rows]
        columns[f"gross_{label}"] = [0.0] + [r[3 * j + 1] for r in rows]
        columns[f"total_power_{label}"] = [0.0] + [r[3 * j + 2] for r in rows]

    ref = _reference_label(spec)
    summary = {}
    for label in labels:
        net = columns[f"net_{label}"][1:]
        i = int(np.argmax(net))  # first maximum: lowest power wins ties
        t = threshold_power(configs[label])
        summary[label] = {
            "argmax_index": i,
            "argmax_power_mw": levels[i],
            "argmax_net_utility": net[i],
            "argmax_interior": 0 < i < len(levels) - 1,
            "threshold_mw": t.power,
            "threshold_reason": t.reason,
        }
    ref_net = columns[f"net_{ref}"]
    for label in labels:
        if label == ref:
            continue
        mine = columns[f"net_{label}"]
        columns[f"ratio_{label}_vs_{ref}"] = [
            m / r if r > 0 else float("nan") for m, r in zip(mine, ref_net)]
        i = summary[label]["argmax_index"] + 1
        summary[label]["ratio_vs_reference_at_argmax"] = (
            mine[i] / ref_net[i] if ref_net[i] > 0 else None)
    return _finish(spec, columns, {"reference_label": ref, "summary": summary,
                                   "grid_spacing": spacing})


def run_equilibrium_solve(spec, jobs=1):
    """Best-response equilibrium per label, certified and cross-checked."""
    max_rounds = int(spec.params.get("max_rounds", 100))
    n_players = spec.params.get("n_players")
    cols = {k: [] for k in ("label", "player", "action", "power_mw", "net_utility",
                            "is_nash", "converged", "iterations", "in_bruteforce_set",
                            "oracle_warning")}
    summary = {}

    def solve(item):
        label, cfg = item
        if n_players is not None:
            cfg = cfg.replace(n_players=int(n_players))
        res = find_equilibrium(cfg, max_rounds=max_rounds)
        try:
            nash_set = enumerate_nash_bruteforce(cfg)
            warning = ""
            member = res.profile in nash_set
            n_nash = len(nash_set)
        except OracleTooLarge as exc:
            warning, member, n_nash = str(exc), None, None
        return label, cfg, res, member, warning, n_nash

    for label, cfg, res, member, warning, n_nash in _map(solve, list(spec.configs.items()), jobs):
        for i, a in enumerate(res.profile):
            cols["label"].append(label)
            cols["player"].append(i)
            cols["action"].append("silent" if a is None else "transmit")
            cols["power_mw"].append(0.0 if a is None else a)
            cols["net_utility"].append(res.per_player_net[i])
            cols["is_nash"].append(res.is_nash)
            cols["converged"].append(res.converged)
            cols["iterations"].append(res.iterations)
            cols["in_bruteforce_set"].append(member)
            cols["oracle_warning"].append(warning)
        summary[label] = {"n_players": cfg.n_players, "bruteforce_nash_count": n_nash,
                          "trace_length": len(res.best_response_trace)}
    return _finish(spec, cols, {"summary": summary, "max_rounds": max_rounds})


RUNNERS = {
    "ber_sweep": run_ber_sweep,
    "frame_success_sweep": run_frame_success_sweep,
    "power_efficiency_sweep": run_power_efficiency_sweep,
    "net_utility_sweep": run_net_utility_sweep,
    "equilibrium_solve": run_equilibrium_solve,
}


def run_experiment(spec, jobs=1):
    table = RUNNERS[spec.kind](spec, jobs=jobs)
    table.metadata["spec"] = spec.snapshot()
    return table


# -- output -------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def format_rows(table):
    """CSV text of the header and data rows (no metadata)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(table.columns))
    for r in table.rows():
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(type(o).__name__)


def write_table(table, path, timestamp=True, sidecar=True):
    """Write ``table`` as CSV with a ``#`` metadata header and a JSON sidecar.

    Returns the CSV path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = dict(table.metadata)
    if timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines = []
    for key in sorted(meta):
        if key == "spec":
            continue
        lines.append(f"# {key}: {json.dumps(meta[key], sort_keys=True, default=_json_default)}")
    if "spec" in meta:
        lines.append(f"# resolved_spec: {path.with_suffix('.json').name}")
    path.write_text("\n".join(lines) + "\n" + format_rows(table))
    if sidecar:
        path.with_suffix(".json").write_text(
            json.dumps(meta, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def read_table(path):
    """Parse a CSV written by :func:`write_table` back into string columns."""
    meta_lines, body = [], []
    for line in Path(path).read_text().splitlines():
        (meta_lines if line.startswith("#") else body).append(line)
    reader = csv.reader(body)
    header = next(reader)
    cols = {h: [] for h in header}
    for r in reader:
        for h, v in zip(header, r):
            cols[h].append(v)
    meta = {}
    for line in meta_lines:
        key, _, value = line[1:].strip().partition(": ")
        try:
            meta[key] = json.loads(value)
        except json.JSONDecodeError:
            meta[key] = value
    return ResultTable(cols, meta)
