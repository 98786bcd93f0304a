"""
Cooling overhead and constant infrastructure power
==================================================

In a data center, cooling scales with the chip's dynamic power and other
infrastructure draws a constant amount. Folding cooling into a weight ``w``
on dynamic power gives the same optimum as the chip-level problem at
``P_const / w``. Higher constant power favors the general-purpose core.
"""

# %%
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from multiamdahl import preset_hpc, solve_datacenter, solve_energy
from multiamdahl.sweep import datacenter_sweep

out = Path("demo_output")
out.mkdir(exist_ok=True)
hpc = preset_hpc()
p_const = np.geomspace(0.01, 100, 25)

fig, ax = plt.subplots()
for w in (1.0, 1.5, 2.0, 3.0):
    t = datacenter_sweep(hpc, w, p_const)
    ax.semilogx(p_const, t.column("CPU", "datacenter"), label=f"w = {w:g}")
ax.set_xlabel("constant infrastructure power")
ax.set_ylabel("CPU area / A")
ax.legend()
fig.savefig(out / "datacenter.png", dpi=120)

# %%
# The scaling identity, checked numerically.

a = solve_datacenter(hpc.replace(dynamic_weight=2.0), 1.0).areas
b = solve_energy(hpc, 0.5).areas
print("w=2, P=1  ", a)
print("w=1, P=0.5", b)
print("max difference", np.max(np.abs(a - b)))
