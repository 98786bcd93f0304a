"""Accelerator/power functions, allocation objectives and their marginals.

All scenario-level functions accept ``areas`` as a 1-D vector (one entry per
unit) or as a stack of allocations with units along the last axis; the sum
over units is taken on that axis.
"""

from __future__ import annotations

import numpy as np

from .model import OBJECTIVE_KINDS, Scenario, UnitModel

#: smallest admissible area as a fraction of the chip budget
AREA_FLOOR = 1e-9


def _check_positive(a):
    a = np.asarray(a, dtype=float)
    if np.any(~(a > 0)):
        raise ValueError("areas must be strictly positive")
    return a


def accel_fn(unit: UnitModel, a):
    """Inverted speedup ``a**alpha / e`` of ``unit`` at area ``a``."""
    a = _check_positive(a)
    return a ** unit.alpha / unit.efficiency


def accel_fn_deriv(unit: UnitModel, a):
    a = _check_positive(a)
    return unit.alpha * a ** (unit.alpha - 1.0) / unit.efficiency


def power_fn(unit: UnitModel, a):
    """Dynamic power ``a**beta`` drawn by ``unit`` while active."""
    a = _check_positive(a)
    return a ** unit.beta


def _areas(scenario: Scenario, areas) -> np.ndarray:
    a = np.asarray(areas, dtype=float)
    if a.ndim == 0 or a.shape[-1] != scenario.n_units:
        raise ValueError(
            f"expected {scenario.n_units} areas per allocation, got shape {a.shape}"
        )
    floor = AREA_FLOOR * scenario.area_budget * (1.0 - 1e-3)
    if np.any(~(a >= floor)):
        raise ValueError(f"areas must be >= the domain floor {AREA_FLOOR:g} * A")
    return a


def _weights(scenario: Scenario) -> np.ndarray:
    return scenario.times / scenario.efficiencies


def delay_objective(scenario: Scenario, areas):
    """Total execution time ``sum_i t_i f_i(a_i)``."""
    a = _areas(scenario, areas)
    f = a ** scenario.alphas / scenario.efficiencies
    return np.sum(f * scenario.times, axis=-1)


def _energy(scenario: Scenario, a, weight: float, p_const: float):
    if p_const < 0:
        raise ValueError(f"constant power must be >= 0, got {p_const}")
    f = a ** scenario.alphas / scenario.efficiencies
    p = a ** scenario.betas
    return np.sum((weight * p + p_const) * f * scenario.times, axis=-1)


def energy_objective(scenario: Scenario, areas, p_sys: float):
    """Dynamic plus constant-system energy ``sum_i (p_i + P_sys) f_i t_i``."""
    return _energy(scenario, _areas(scenario, areas), 1.0, p_sys)


def datacenter_objective(scenario: Scenario, areas, p_const: float):
    """Data-center energy ``sum_i (w p_i + P_const) f_i t_i``.

    ``w = scenario.dynamic_weight`` folds the IT-proportional part of the
    infrastructure power (cooling) into the dynamic term.
    """
    w = scenario.dynamic_weight
    if w < 1:
        raise ValueError(f"dynamic weight w must be >= 1, got {w}")
    return _energy(scenario, _areas(scenario, areas), w, p_const)


def objective(scenario: Scenario, areas, kind: str, p: float | None = None):
    """Dispatch on ``kind``; ``p`` defaults to the scenario's system power."""
    p = scenario.p_sys if p is None else p
    if kind == "delay":
        return delay_objective(scenario, areas)
    if kind == "energy":
        return energy_objective(scenario, areas, p)
    if kind == "datacenter":
        return datacenter_objective(scenario, areas, p)
    raise ValueError(f"unknown objective kind {kind!r}; expected one of {OBJECTIVE_KINDS}")


def marginal_terms(scenario: Scenario, areas, kind: str, p: float | None = None):
    """Split each marginal into its (dynamic, constant-power) parts.

    For delay the dynamic part is zero and the second part is ``t f'``. For
    energy kinds the parts are ``t w gamma a**(gamma-1) / e`` and
    ``t P alpha a**(alpha-1) / e``; their sum is the marginal.
    """
    p = scenario.p_sys if p is None else p
    a = _areas(scenario, areas)
    al = scenario.alphas
    c = _weights(scenario)
    if kind == "delay":
        static = c * al * a ** (al - 1.0)
        return np.zeros_like(static), static
    if kind not in ("energy", "datacenter"):
        raise ValueError(f"unknown objective kind {kind!r}; expected one of {OBJECTIVE_KINDS}")
    if p < 0:
        raise ValueError(f"constant power must be >= 0, got {p}")
    w = scenario.dynamic_weight if kind == "datacenter" else 1.0
    gamma = al + scenario.betas
    dynamic = c * w * gamma * a ** (gamma - 1.0)
    static = c * p * al * a ** (al - 1.0)
    return dynamic, static


def marginals(scenario: Scenario, areas, kind: str, p: float | None = None) -> np.ndarray:
    """Per-unit derivative of the objective with respect to that unit's area."""
    dynamic, static = marginal_terms(scenario, areas, kind, p)
    return dynamic + static


def kkt_residual(
    scenario: Scenario,
    areas,
    kind: str,
    p: float | None = None,
    include=None,
) -> float:
    """Largest pairwise mismatch ``max |m_i - m_j|`` among the included units."""
    m = marginals(scenario, areas, kind, p)
    if include is not None:
        m = m[np.asarray(include, dtype=bool)]
    if m.size < 2:
        return 0.0
    return float(np.max(m) - np.min(m))
