#!/usr/bin/env python3
"""Sweep the common SINR target and watch the admitted-user count fall.

For each (target, requesting-count) grid point this draws many random cells
and averages how many users the greedy pass admits. Higher targets make each
user exponentially more expensive in power, so the count drops; more
requesting users mean more chances of excellent channels, so the count rises
with N at any fixed target. Uses fewer runs than the shipped experiments to
stay quick; pass a runs count as argv[1] to change that.
"""

import sys

from noma_crn import ChannelModel, run_fig2

RUNS = int(sys.argv[1]) if len(sys.argv) > 1 else 1500
TARGETS_DB = [5, 10, 15, 20, 25]
N_VALUES = [5, 10, 15]

model = ChannelModel(num_sus=max(N_VALUES), num_pus=0)
stats = run_fig2(model, TARGETS_DB, N_VALUES, RUNS, master_seed=2026)

print(f"mean admitted users over {RUNS} runs (no primary users -> 20 dBm budget)\n")
print(f"{'target':>8} | " + " ".join(f"{f'N={n}':>8}" for n in N_VALUES))
print("-" * (11 + 9 * len(N_VALUES)))
for i, t in enumerate(TARGETS_DB):
    row = [s.mean_admitted for s in stats if s.target_sinr_db == t]
    print(f"{t:>6} dB | " + " ".join(f"{v:>8.2f}" for v in row))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for n in N_VALUES:
        ys = [s.mean_admitted for s in stats if s.n_requesting == n]
        ax.plot(TARGETS_DB, ys, marker="o", label=f"N = {n}")
    ax.set_xlabel("targeted SINR (dB)")
    ax.set_ylabel("mean admitted users")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig("admission_sweep.png", dpi=120)
    print("\nsaved plot to admission_sweep.png")
except ImportError:
    print("\n(matplotlib not installed; skipping the plot)")
