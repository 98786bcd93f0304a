"""
Checking the solver against exhaustive search
=============================================

The grid oracle evaluates the objective at every point of a simplex grid.
The solver must do at least as well as the best grid point, up to the
largest objective change over one grid move, and should land within one
step of it.
"""

# %%
import numpy as np

from multiamdahl import brute_force_oracle, preset_hpc, preset_multi_accelerator, solve, verify

for chip, step in ((preset_hpc(), 1e-4), (preset_multi_accelerator(), 1e-2)):
    print(f"\n{chip.name}: grid step {step:g}")
    for s in (None, 0.02, 0.1, 0.4, 0.95):
        kind = "delay" if s is None else "energy"
        p = None if s is None else chip.fraction_to_power(s)
        res = solve(chip, kind, p)
        orc = brute_force_oracle(chip, p, kind, grid_step=step)
        rep = verify(chip, res, p, kind, oracle=orc)
        dist = np.max(np.abs(res.areas - orc.areas)) / orc.grid_step
        label = kind if s is None else f"s={s:g}"
        print(f"  {label:8s} gap {rep.oracle_gap:+.2e}  slack {rep.oracle_slack:.2e}  "
              f"distance {dist:.2f} steps  {'ok' if rep.passed else 'check'}")

# %%
# Rounding the continuous optimum to the grid need not give a grid point.
# On the five-unit chip at s = 2% the rounded step counts sum to 101, so
# the grid's best point gives up one step on the largest unit.

chip = preset_multi_accelerator()
p = chip.fraction_to_power(0.02)
res = solve(chip, "energy", p)
print(np.round(res.areas / 0.01, 2), np.round(res.areas / 0.01).sum())
