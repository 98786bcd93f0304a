"""Design-space sweeps over constant system power.

``sweep_psys`` traces the energy-optimal allocation as the constant power
share grows, ``curve_energy_vs_allocation`` samples the full energy profile of
a two-unit split, ``limit_check`` measures how fast the energy optimum closes
in on the delay optimum, and ``datacenter_sweep`` repeats the sweep for the
data-center objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import objectives as obj
from .model import Scenario, power_to_fraction
from .solver import (
    DEFAULT_SETTINGS,
    ConvergenceError,
    SolverSettings,
    solve_datacenter,
    solve_delay,
    solve_energy,
    solve_two_unit,
)

#: constant-power shares named for the HPC study
NAMED_FRACTIONS = (0.02, 0.10, 0.40, 0.95)


def log_s_grid(n: int = 33, lo: float = 0.005, hi: float = 0.99) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def default_s_grid() -> np.ndarray:
    """33 log-spaced shares in [0.005, 0.99] plus the four named ones."""
    return np.unique(np.concatenate([log_s_grid(), NAMED_FRACTIONS]))


@dataclass
class SweepRow:
    s: float
    p_sys: float
    areas: np.ndarray
    objective: float
    residual: float
    label: str = "energy"
    error: str | None = None


@dataclass
class SweepTable:
    """Rows ordered by ``s``; the last row is the delay-optimal limit (``s = 1``)."""

    scenario_name: str
    objective: str
    unit_names: list[str]
    rows: list[SweepRow] = field(default_factory=list)

    def column(self, name: str, label: str | None = "energy") -> np.ndarray:
        rows = [r for r in self.rows if label is None or r.label == label]
        if name in self.unit_names:
            k = self.unit_names.index(name)
            return np.array([r.areas[k] for r in rows])
        return np.array([getattr(r, name) for r in rows])

    @property
    def limit(self) -> SweepRow | None:
        for r in self.rows:
            if r.label == "delay":
                return r
        return None


@dataclass
class Curve:
    s: float
    p_sys: float
    x: np.ndarray  # first unit's area as a fraction of A
    energy: np.ndarray
    normalized: np.ndarray
    argmin: int

    @property
    def x_opt(self) -> float:
        return float(self.x[self.argmin])


@dataclass
class CurveTable:
    scenario_name: str
    unit_names: list[str]
    curves: list[Curve]


def _energy_row(scenario, s, p, settings, kind="energy") -> SweepRow:
    # same solver path for both kinds so w = 1 reproduces energy exactly
    if scenario.n_units == 2:
        res = solve_two_unit(scenario, p, settings, kind=kind)
    elif kind == "datacenter":
        res = solve_datacenter(scenario, p, settings)
    else:
        res = solve_energy(scenario, p, settings)
    return SweepRow(s, p, res.areas, res.objective_value, res.max_marginal_residual, kind)


def _safe_row(scenario, s, p, settings, kind) -> SweepRow:
    try:
        return _energy_row(scenario, s, p, settings, kind)
    except (ConvergenceError, ValueError, FloatingPointError) as exc:
        nan = np.full(scenario.n_units, np.nan)
        return SweepRow(s, p, nan, math.nan, math.nan, kind, error=str(exc))


def _delay_row(scenario, settings) -> SweepRow:
    res = solve_delay(scenario, settings)
    return SweepRow(1.0, math.inf, res.areas, res.objective_value, res.max_marginal_residual, "delay")


def sweep_psys(
    scenario: Scenario,
    s_values: Sequence[float] | None = None,
    settings: SolverSettings | None = None,
) -> SweepTable:
    """Energy-optimal allocation for each constant-power share ``s``.

    ``s`` maps to absolute power through ``P_sys = s / (1 - s) * P_ref``. A row
    whose solve fails carries the error message and NaN areas; the sweep goes
    on. The delay-optimal allocation is appended as the ``s = 1`` limit row.
    """
    st = settings or DEFAULT_SETTINGS
    s_values = default_s_grid() if s_values is None else np.asarray(s_values, dtype=float)
    if np.any(np.diff(s_values) < 0):
        raise ValueError("s_values must be sorted ascending")
    if np.any((s_values < 0) | (s_values >= 1)):
        raise ValueError("s_values must lie in [0, 1)")
    table = SweepTable(scenario.name, "energy", scenario.unit_names)
    for s in s_values:
        table.rows.append(_safe_row(scenario, float(s), scenario.fraction_to_power(s), st, "energy"))
    table.rows.append(_delay_row(scenario, st))
    return table


def datacenter_sweep(
    scenario: Scenario,
    w: float,
    p_const_values: Sequence[float],
    settings: SolverSettings | None = None,
) -> SweepTable:
    """Data-center optimum for each constant infrastructure power ``P_const``.

    The ``s`` column holds ``P_const / (P_const + P_ref)``.
    """
    if w < 1:
        raise ValueError(f"dynamic weight w must be >= 1, got {w}")
    p_values = np.asarray(p_const_values, dtype=float)
    if np.any(np.diff(p_values) < 0):
        raise ValueError("p_const_values must be sorted ascending")
    st = settings or DEFAULT_SETTINGS
    sc = scenario.replace(dynamic_weight=float(w), objective_kind="datacenter")
    table = SweepTable(scenario.name, "datacenter", scenario.unit_names)
    for p in p_values:
        s = power_to_fraction(float(p), sc.reference_power)
        table.rows.append(_safe_row(sc, s, float(p), st, "datacenter"))
    table.rows.append(_delay_row(sc, st))
    return table


def curve_energy_vs_allocation(
    scenario: Scenario,
    s_values: Sequence[float] = NAMED_FRACTIONS,
    n_points: int = 401,
    settings: SolverSettings | None = None,
) -> CurveTable:
    """Energy of a two-unit chip against the first unit's share of the area.

    Each curve is divided by its own minimum, so the optimum sits at 1.
    """
    if scenario.n_units != 2:
        raise ValueError(f"curves need a 2-unit scenario, got {scenario.n_units} units")
    if n_points < 16:
        raise ValueError("n_points must be >= 16")
    st = settings or DEFAULT_SETTINGS
    A = scenario.area_budget
    floor = st.area_floor * A
    a1 = np.linspace(floor, A - floor, n_points)
    pts = np.column_stack([a1, A - a1])
    curves = []
    for s in s_values:
        p = scenario.fraction_to_power(s)
        e = obj.energy_objective(scenario, pts, p)
        k = int(np.argmin(e))
        curves.append(Curve(float(s), p, a1 / A, e, e / e[k], k))
    return CurveTable(scenario.name, scenario.unit_names, curves)


@dataclass
class LimitReport:
    p_values: np.ndarray
    gaps: np.ndarray
    delay_areas: np.ndarray
    energy_areas: np.ndarray
    tolerance: float

    @property
    def nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.gaps) <= 1e-12))

    @property
    def passed(self) -> bool:
        return self.nonincreasing and bool(self.gaps[-1] < self.tolerance)


def limit_check(
    scenario: Scenario,
    p_sys_ladder: Sequence[float] = (1e1, 1e2, 1e3, 1e4),
    settings: SolverSettings | None = None,
) -> LimitReport:
    """Max-norm distance between energy- and delay-optimal areas per rung.

    Passes when the distance never grows along the ladder and ends below
    ``0.01 * A``.
    """
    ladder = np.asarray(p_sys_ladder, dtype=float)
    if ladder.size < 3 or np.any(np.diff(ladder) <= 0):
        raise ValueError("ladder must be strictly increasing with at least 3 rungs")
    st = settings or DEFAULT_SETTINGS
    delay = solve_delay(scenario, st).areas
    energy = np.array([solve_energy(scenario, p, st).areas for p in ladder])
    gaps = np.max(np.abs(energy - delay), axis=1)
    return LimitReport(ladder, gaps, delay, energy, 0.01 * scenario.area_budget)
