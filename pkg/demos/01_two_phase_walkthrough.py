#!/usr/bin/env python3
"""Walk through the two allocation phases on a small hand-built network.

Four secondary users with different channel gains and SINR targets share a
downlink with one primary user whose interference limit caps the usable
transmit power. Phase 1 admits users greedily in descending-gain order at
exact-threshold power; phase 2 spends the leftover budget raising the lowest
SINRs until the budget is gone.
"""

import numpy as np

from noma_crn import (
    admit,
    compute_sinr,
    linear_to_db,
    power_budget,
    solve_waterfill,
    sort_users,
    watts_to_dbm,
)

# Per-user data in caller order: gains (linear), common noise floor, targets.
su_gains = [2e-6, 8e-5, 5e-7, 1e-5]
su_noise = [1e-15] * 4
su_targets = [10 ** 0.8, 10 ** 0.5, 10 ** 1.2, 10 ** 1.0]  # 8, 5, 12, 10 dB

scenario = sort_users(
    su_gains, su_noise, su_targets,
    pu_gains=[3e-9], pu_interference_limits=[1e-12],  # one primary user
    p_max=0.1,
)

print("sorted users (best gain first), original indices:", scenario.order)
print("gains:", scenario.su_gains)
print("targets (dB):", np.round(linear_to_db(scenario.su_thresholds), 1))

budget = power_budget(scenario)
print(f"\npower budget: {budget:.3e} W = {watts_to_dbm(budget):.1f} dBm")
print("(the primary user tolerates -90 dBm; its channel sets the cap below p_max)")

result = admit(scenario, budget)
print(f"\nphase 1 admits {result.admitted_count} of {scenario.n_sus} users")
print("powers (W):", result.powers)
print(f"remaining power: {result.remaining_power:.3e} W "
      f"({100 * result.remaining_power / budget:.1f}% of the budget)")
print("admitted SINRs sit exactly on their targets (dB):",
      np.round(linear_to_db(compute_sinr(scenario.prefix(result.admitted_count),
                                         result.powers)), 2))

solution = solve_waterfill(scenario.prefix(result.admitted_count), budget)
print(f"\nphase 2 lifts the minimum SINR to theta* = "
      f"{linear_to_db(solution.theta_star):.2f} dB ({solution.theta_star:.2f} linear)")
print("final powers (W):", solution.powers)
print("final SINRs (dB):", np.round(linear_to_db(solution.achieved_sinr), 2))
print("\nusers whose target exceeds theta* stay pinned at the target;")
print("everyone else floats up to the common level, and the budget is spent:")
print(f"sum(powers) = {solution.powers.sum():.6e} W vs budget {budget:.6e} W")
