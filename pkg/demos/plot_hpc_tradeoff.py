"""
Energy versus area on a CPU plus vector-unit chip
=================================================

A two-unit chip splits its area between a latency-oriented CPU and a
throughput-oriented vector unit. Half of the work runs on each. We look at
how the energy-optimal split moves as constant system power (leakage,
uncore, memory) takes a larger share of the power budget.
"""

# %%
# Setup
# -----
# ``preset_hpc`` builds the scenario. Shares ``s`` of constant power are
# mapped to absolute power with ``P = s / (1 - s) * A``.

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from multiamdahl import preset_hpc, solve_delay
from multiamdahl.sweep import NAMED_FRACTIONS, curve_energy_vs_allocation, sweep_psys

out = Path("demo_output")
out.mkdir(exist_ok=True)
hpc = preset_hpc()
print(hpc.unit_names, hpc.alphas, hpc.betas)

# %%
# Energy profiles
# ---------------
# Each curve is energy as a function of the CPU share, divided by its own
# minimum. Low constant power pushes the optimum toward a tiny CPU.

curves = curve_energy_vs_allocation(hpc, NAMED_FRACTIONS)
fig, ax = plt.subplots()
for c in curves.curves:
    line, = ax.plot(c.x, c.normalized, label=f"s = {c.s:.0%}")
    ax.plot(c.x_opt, 1.0, "o", color=line.get_color())
ax.set_ylim(0.9, 3)
ax.set_xlabel("CPU area / A")
ax.set_ylabel("normalized energy")
ax.legend()
fig.savefig(out / "hpc_curves.png", dpi=120)

for c in curves.curves:
    print(f"s={c.s:5.2f}  best CPU share {c.x_opt:.4f}")

# %%
# Sweep over constant power
# -------------------------
# The CPU share rises with constant power and settles on the delay optimum.

table = sweep_psys(hpc)
s = table.column("s")
fig, ax = plt.subplots()
for name in table.unit_names:
    ax.semilogx(s, table.column(name), label=name)
ax.axhline(solve_delay(hpc).areas[0], ls=":", color="gray", label="CPU, delay optimum")
ax.set_xlabel("constant power share s")
ax.set_ylabel("area / A")
ax.legend()
fig.savefig(out / "hpc_sweep.png", dpi=120)
print(f"CPU share {s[0]:.3f}: {table.column('CPU')[0]:.4f}   {s[-1]:.3f}: {table.column('CPU')[-1]:.4f}")
