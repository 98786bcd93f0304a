"""Optimal area allocation for heterogeneous chips under delay and energy goals."""

from .model import (
    AllocationResult,
    Scenario,
    SystemPowerSpec,
    UnitModel,
    Violation,
    Workload,
    fraction_to_power,
    power_to_fraction,
    preset_hpc,
    preset_multi_accelerator,
    validate,
)
from .objectives import (
    accel_fn,
    accel_fn_deriv,
    datacenter_objective,
    delay_objective,
    energy_objective,
    kkt_residual,
    marginals,
    power_fn,
)
from .solver import (
    ConvergenceError,
    SolverSettings,
    VerificationReport,
    brute_force_oracle,
    solve,
    solve_datacenter,
    solve_delay,
    solve_energy,
    solve_two_unit,
    verify,
)

__version__ = "0.1.0"
