"""Domain types for heterogeneous-chip area allocation.

A chip of area ``A`` is split among computational units. Unit ``i`` runs its
workload segment ``t_i`` (time on a reference CPU) in ``t_i * f_i(a_i)`` where
``f_i(a) = a**alpha / efficiency`` is the inverted speedup, and burns dynamic
power ``p_i(a) = a**beta`` while doing so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

OBJECTIVE_KINDS = ("delay", "energy", "datacenter")
POWER_MODES = ("absolute", "fraction")

#: exponent ranges explored for massively parallel units
VPU_ALPHA_RANGE = (-1.0, -0.75)
VPU_BETA_RANGE = (1.0, 1.25)

#: Pollack's rule and the single-core power exponent
CPU_ALPHA = -0.5
CPU_BETA = 0.875

#: area-efficiency factors of the ASIC accelerators relative to the CPU
ACCELERATOR_EFFICIENCIES = {
    "DMM": 39.0,
    "FFT1024": 692.0,
    "FFT16": 2804.0,
    "BlackScholes": 24.0,
}


@dataclass(frozen=True)
class UnitModel:
    """One computational unit with power-law speed and power scaling."""

    name: str
    alpha: float
    beta: float
    efficiency: float = 1.0

    @property
    def gamma(self) -> float:
        """Exponent of the dynamic energy ``p(a) * f(a) ~ a**(alpha + beta)``."""
        return self.alpha + self.beta


@dataclass(frozen=True)
class Workload:
    times: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))

    def __len__(self) -> int:
        return len(self.times)


def fraction_to_power(s: float, reference_power: float = 1.0) -> float:
    """Absolute constant power that makes up a share ``s`` of the total budget.

    The total budget is ``P_sys + reference_power``, so
    ``P_sys = s / (1 - s) * reference_power``.
    """
    if not 0.0 <= s < 1.0:
        raise ValueError(f"power fraction must lie in [0, 1), got {s}")
    return s / (1.0 - s) * reference_power


def power_to_fraction(p: float, reference_power: float = 1.0) -> float:
    if p < 0:
        raise ValueError(f"absolute power must be >= 0, got {p}")
    if math.isinf(p):
        return 1.0
    return p / (p + reference_power)


@dataclass(frozen=True)
class SystemPowerSpec:
    """Constant system power, either absolute or as a share of the budget."""

    mode: str = "absolute"
    value: float = 0.0

    def absolute(self, reference_power: float = 1.0) -> float:
        if self.mode == "fraction":
            return fraction_to_power(self.value, reference_power)
        if self.mode == "absolute":
            return float(self.value)
        raise ValueError(f"unknown system power mode {self.mode!r}")

    @classmethod
    def fraction(cls, s: float) -> "SystemPowerSpec":
        return cls("fraction", float(s))


@dataclass(frozen=True)
class Scenario:
    """A complete allocation problem.

    The reference chip power used to interpret fractional system power is the
    area budget itself, i.e. ``P_ref = A``.
    """

    area_budget: float
    units: tuple[UnitModel, ...]
    workload: Workload
    system_power: SystemPowerSpec = field(default_factory=SystemPowerSpec)
    dynamic_weight: float = 1.0
    objective_kind: str = "energy"
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        if not isinstance(self.workload, Workload):
            object.__setattr__(self, "workload", Workload(self.workload))

    @property
    def n_units(self) -> int:
        return len(self.units)

    @property
    def unit_names(self) -> list[str]:
        return [u.name for u in self.units]

    @property
    def reference_power(self) -> float:
        return float(self.area_budget)

    @property
    def p_sys(self) -> float:
        """Absolute constant system power (``P_const`` for data-center runs)."""
        return self.system_power.absolute(self.reference_power)

    def fraction_to_power(self, s: float) -> float:
        return fraction_to_power(s, self.reference_power)

    # vectorized views used by the objectives and solvers
    @property
    def alphas(self) -> np.ndarray:
        return np.array([u.alpha for u in self.units], dtype=float)

    @property
    def betas(self) -> np.ndarray:
        return np.array([u.beta for u in self.units], dtype=float)

    @property
    def efficiencies(self) -> np.ndarray:
        return np.array([u.efficiency for u in self.units], dtype=float)

    @property
    def times(self) -> np.ndarray:
        return np.array(self.workload.times, dtype=float)

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def with_times(self, times: Sequence[float]) -> "Scenario":
        return replace(self, workload=Workload(tuple(times)))

    def with_unit(self, index: int, **changes) -> "Scenario":
        units = list(self.units)
        units[index] = replace(units[index], **changes)
        return replace(self, units=tuple(units))


class Violation(NamedTuple):
    field: str
    rule: str

    def __str__(self) -> str:
        return f"{self.field}: {self.rule}"


def _finite(x) -> bool:
    try:
        return math.isfinite(float(x))
    except (TypeError, ValueError):
        return False


def validate(scenario: Scenario) -> list[Violation]:
    """Return every broken invariant of ``scenario``; empty when valid."""
    out: list[Violation] = []
    if not _finite(scenario.area_budget) or scenario.area_budget <= 0:
        out.append(Violation("area_budget", "must be a finite number > 0"))
    if not scenario.units:
        out.append(Violation("units", "at least one unit is required"))
    names = [u.name for u in scenario.units]
    if len(set(names)) != len(names):
        out.append(Violation("units", "unit names must be unique"))
    for i, u in enumerate(scenario.units):
        where = f"units[{i}]({u.name})"
        if not _finite(u.alpha) or u.alpha >= 0:
            out.append(Violation(f"{where}.alpha", "must be < 0 (accelerator function strictly decreasing)"))
        if not _finite(u.beta) or u.beta <= 0:
            out.append(Violation(f"{where}.beta", "must be > 0"))
        if not _finite(u.efficiency) or u.efficiency <= 0:
            out.append(Violation(f"{where}.efficiency", "must be > 0"))
    times = scenario.workload.times
    if len(times) != len(scenario.units):
        out.append(Violation(
            "workload",
            f"length {len(times)} does not match unit count {len(scenario.units)}",
        ))
    if any(not _finite(t) or t < 0 for t in times):
        out.append(Violation("workload", "all times must be finite and >= 0"))
    elif not any(t > 0 for t in times):
        out.append(Violation("workload", "at least one time must be > 0"))
    sp = scenario.system_power
    if sp.mode not in POWER_MODES:
        out.append(Violation("system_power.mode", f"must be one of {POWER_MODES}"))
    elif not _finite(sp.value):
        out.append(Violation("system_power.value", "must be finite"))
    elif sp.mode == "absolute" and sp.value < 0:
        out.append(Violation("system_power.value", "absolute power must be >= 0"))
    elif sp.mode == "fraction" and not 0 <= sp.value < 1:
        out.append(Violation("system_power.value", "fraction must lie in [0, 1)"))
    if not _finite(scenario.dynamic_weight) or scenario.dynamic_weight < 1:
        out.append(Violation("dynamic_weight", "w must be >= 1"))
    if scenario.objective_kind not in OBJECTIVE_KINDS:
        out.append(Violation("objective_kind", f"must be one of {OBJECTIVE_KINDS}"))
    return out


@dataclass
class AllocationResult:
    """Outcome of one allocation solve.

    ``objective_value`` is a delay for ``kind == "delay"`` and an energy
    otherwise. ``lam`` is the common marginal at the optimum (``nan`` when the
    method does not produce one, e.g. the grid oracle).
    """

    areas: np.ndarray
    lam: float
    objective_value: float
    max_marginal_residual: float
    feasibility_gap: float
    kind: str = "delay"
    p_sys: float = 0.0
    method: str = ""
    iterations: int = 0
    grid_step: float | None = None
    grid_slack: float | None = None
    grid_points: int | None = None

    def as_dict(self, names: Sequence[str] | None = None) -> dict:
        names = names or [f"unit{i}" for i in range(len(self.areas))]
        return {
            "areas": dict(zip(names, map(float, self.areas))),
            "lambda": self.lam,
            "objective": self.objective_value,
            "residual": self.max_marginal_residual,
            "feasibility_gap": self.feasibility_gap,
            "kind": self.kind,
            "p_sys": self.p_sys,
            "method": self.method,
        }


def preset_hpc(
    parallel_fraction: float = 0.5,
    alpha_vpu: float = -1.0,
    beta_vpu: float = 1.0,
    system_power: SystemPowerSpec | None = None,
) -> Scenario:
    """CPU + vector accelerator chip with unit area budget.

    ``parallel_fraction`` is the share of reference-CPU time that runs on the
    vector unit. The VPU exponents must stay inside the explored ranges
    ``alpha in [-1, -0.75]`` and ``beta in [1, 1.25]``.
    """
    if not 0.0 < parallel_fraction < 1.0:
        raise ValueError(f"parallel_fraction must lie in (0, 1), got {parallel_fraction}")
    lo, hi = VPU_ALPHA_RANGE
    if not lo <= alpha_vpu <= hi:
        raise ValueError(f"alpha_vpu must lie in [{lo}, {hi}], got {alpha_vpu}")
    lo, hi = VPU_BETA_RANGE
    if not lo <= beta_vpu <= hi:
        raise ValueError(f"beta_vpu must lie in [{lo}, {hi}], got {beta_vpu}")
    units = (
        UnitModel("CPU", CPU_ALPHA, CPU_BETA, 1.0),
        UnitModel("VPU", alpha_vpu, beta_vpu, 1.0),
    )
    return Scenario(
        area_budget=1.0,
        units=units,
        workload=Workload((1.0 - parallel_fraction, parallel_fraction)),
        system_power=system_power or SystemPowerSpec(),
        objective_kind="energy",
        name="hpc",
    )


def preset_multi_accelerator(
    alpha_accel: float = -1.0,
    beta_accel: float = 1.25,
    cpu_share: float = 0.1,
    system_power: SystemPowerSpec | None = None,
) -> Scenario:
    """CPU plus four ASIC accelerators (DMM, FFT1024, FFT16, BlackScholes).

    Four equal-runtime routines of unit length each; ``cpu_share`` of every
    routine stays on the CPU, so ``t_CPU = 4 * cpu_share`` and each accelerator
    gets ``1 - cpu_share``.

    The accelerator power exponent defaults to 1.25: with ``beta = 1`` and
    ``alpha = -1`` an accelerator's dynamic energy does not depend on its area,
    and the low-power allocation then favours the *least* efficient
    accelerator instead of the most efficient one.
    """
    units = [UnitModel("CPU", CPU_ALPHA, CPU_BETA, 1.0)]
    units += [UnitModel(name, alpha_accel, beta_accel, e) for name, e in ACCELERATOR_EFFICIENCIES.items()]
    n_routines = len(ACCELERATOR_EFFICIENCIES)
    times = (n_routines * cpu_share,) + (1.0 - cpu_share,) * n_routines
    return Scenario(
        area_budget=1.0,
        units=tuple(units),
        workload=Workload(times),
        system_power=system_power or SystemPowerSpec(),
        objective_kind="energy",
        name="multi-accel",
    )


PRESETS = {
    "hpc": preset_hpc,
    "multi-accel": preset_multi_accelerator,
}
