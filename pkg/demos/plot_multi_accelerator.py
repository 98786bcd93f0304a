"""
Allocating area across four accelerators and a CPU
==================================================

Four fixed-function accelerators of very different area efficiency share a
chip with one CPU. At low constant power the most efficient accelerator
takes most of the area. As constant power grows, the allocation drifts
toward the fastest overall configuration, in which the CPU dominates.
"""

# %%
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from multiamdahl import preset_multi_accelerator
from multiamdahl.sweep import NAMED_FRACTIONS, sweep_psys

out = Path("demo_output")
out.mkdir(exist_ok=True)
chip = preset_multi_accelerator()
for u in chip.units:
    print(f"{u.name:13s} alpha={u.alpha:5.2f} beta={u.beta:5.2f} efficiency={u.efficiency:g}")

# %%
# One column per constant-power share, plus the delay optimum on the right.

table = sweep_psys(chip, NAMED_FRACTIONS)
shares = np.array([r.areas for r in table.rows])
labels = [f"{r.s:.0%}" for r in table.rows[:-1]] + ["delay"]

fig, ax = plt.subplots()
bottom = np.zeros(len(labels))
for k, name in enumerate(table.unit_names):
    ax.bar(labels, shares[:, k], bottom=bottom, label=name)
    bottom += shares[:, k]
ax.set_ylabel("area / A")
ax.set_xlabel("constant power share")
ax.legend(loc="upper left", bbox_to_anchor=(1, 1))
fig.tight_layout()
fig.savefig(out / "multi_accel.png", dpi=120)

for lab, row in zip(labels, shares):
    print(f"{lab:>6s} " + " ".join(f"{v:.3f}" for v in row))
