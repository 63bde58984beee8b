#!/usr/bin/env python3
"""One cell snapshot with a different SINR target per user.

With heterogeneous targets the phase-2 optimum splits the admitted users in
two groups: those whose target exceeds the common optimal level stay pinned
exactly at their target, the rest all float up to that level. Rejected users
get no power at all.
"""

from noma_crn import ChannelModel, run_fig4

model = ChannelModel(num_sus=15, num_pus=0)
rows = run_fig4(model, 15, (5.0, 25.0), seed=7)

admitted = [r for r in rows if r.admitted]
lifted = [r for r in admitted if r.achieved_db > r.target_db + 1e-6]

print(f"{len(admitted)} of {len(rows)} users admitted; "
      f"{len(lifted)} of them lifted above their target\n")
print(f"{'user':>5} {'gain':>12} {'target_db':>10} {'achieved_db':>12} {'state':>10}")
for r in rows:
    if not r.admitted:
        state, achieved = "rejected", "-"
    elif r.achieved_db > r.target_db + 1e-6:
        state, achieved = "lifted", f"{r.achieved_db:.2f}"
    else:
        state, achieved = "pinned", f"{r.achieved_db:.2f}"
    print(f"{r.user_index:>5} {r.gain:>12.3e} {r.target_db:>10.2f} {achieved:>12} {state:>10}")

if lifted:
    level = lifted[0].achieved_db
    print(f"\nall lifted users share one achieved level: {level:.3f} dB")
    assert all(abs(r.achieved_db - level) < 1e-6 for r in lifted)
