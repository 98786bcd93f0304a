"""JSON scenario files and CSV tables.

Scenario file layout::

    {
      "name": "my-chip",                       # optional
      "area_budget": 1.0,
      "units": [{"name": "CPU", "alpha": -0.5, "beta": 0.875, "efficiency": 1}],
      "workload": [1.0],
      "system_power": {"mode": "fraction", "value": 0.1},
      "w": 1.0,                                # optional, default 1
      "objective": "energy"                    # optional
    }
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .model import PRESETS, Scenario, SystemPowerSpec, UnitModel, Workload, validate

CSV_DIGITS = 12


class ConfigError(ValueError):
    """Malformed or invalid scenario input."""


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "name": scenario.name,
        "area_budget": scenario.area_budget,
        "units": [
            {"name": u.name, "alpha": u.alpha, "beta": u.beta, "efficiency": u.efficiency}
            for u in scenario.units
        ],
        "workload": list(scenario.workload.times),
        "system_power": {"mode": scenario.system_power.mode, "value": scenario.system_power.value},
        "w": scenario.dynamic_weight,
        "objective": scenario.objective_kind,
    }


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _get(d, key, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    if key not in d:
        raise ConfigError(f"{where}: missing field {key!r}")
    return d[key]


def scenario_from_dict(data: dict) -> Scenario:
    """Build and validate a scenario; raises ConfigError naming the bad field."""
    units_raw = _get(data, "units", "config")
    if not isinstance(units_raw, list):
        raise ConfigError("units: expected a list")
    units = []
    for i, u in enumerate(units_raw):
        where = f"units[{i}]"
        units.append(UnitModel(
            name=str(_get(u, "name", where)),
            alpha=_number(_get(u, "alpha", where), f"{where}.alpha"),
            beta=_number(_get(u, "beta", where), f"{where}.beta"),
            efficiency=_number(u.get("efficiency", 1.0), f"{where}.efficiency"),
        ))
    times = _get(data, "workload", "config")
    if not isinstance(times, list):
        raise ConfigError("workload: expected a list of times")
    times = [_number(t, f"workload[{i}]") for i, t in enumerate(times)]
    sp = data.get("system_power", {"mode": "absolute", "value": 0.0})
    system_power = SystemPowerSpec(
        mode=str(_get(sp, "mode", "system_power")),
        value=_number(_get(sp, "value", "system_power"), "system_power.value"),
    )
    scenario = Scenario(
        area_budget=_number(_get(data, "area_budget", "config"), "area_budget"),
        units=tuple(units),
        workload=Workload(tuple(times)),
        system_power=system_power,
        dynamic_weight=_number(data.get("w", 1.0), "w"),
        objective_kind=str(data.get("objective", "energy")),
        name=str(data.get("name", "custom")),
    )
    bad = validate(scenario)
    if bad:
        raise ConfigError("invalid scenario:\n" + "\n".join(f"  - {v}" for v in bad))
    return scenario


def dump_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")


def load_scenario(source: str) -> Scenario:
    """Load a preset by name (``hpc``, ``multi-accel``) or a JSON file by path."""
    if source in PRESETS:
        return PRESETS[source]()
    path = Path(source)
    if not path.exists():
        raise ConfigError(
            f"{source!r} is neither a preset ({', '.join(PRESETS)}) nor an existing file"
        )
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data)


def fmt(x: float) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{CSV_DIGITS}g")


def table_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def sweep_csv(table) -> str:
    """``s, p_sys, <unit areas>, objective, residual`` per row."""
    header = ["s", "p_sys", *table.unit_names, "objective", "residual"]
    rows = [[r.s, r.p_sys, *r.areas, r.objective, r.residual] for r in table.rows]
    return table_csv(header, rows)


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [
            {k: float(v) if k != "method" else v for k, v in row.items()}
            for row in csv.DictReader(fh)
        ]
