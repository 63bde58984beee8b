"""Phase 1: greedy sequential power allocation maximizing the admitted SU count.

Users are visited in descending-gain order. Each one is granted exactly the
power that pins its SINR to its threshold given what was already allocated,

    P_n = Gamma_n * sum_{j<n} P_j + Gamma_n * N_n / G_n,

as long as that fits in the remaining budget; the first user that does not fit
ends the pass and every later user receives zero power. For identical
thresholds and a common noise level this prefix rule admits the maximum
possible number of users (see :mod:`noma_crn.oracle` for the exhaustive
cross-check); with unequal thresholds it is a heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Scenario

__all__ = ["AdmissionResult", "admit", "required_prefix_power"]


def _required_power(threshold: float, allocated: float, noise_over_gain: float) -> float:
    # Equality allocation: SINR lands exactly on the threshold.
    return threshold * allocated + threshold * noise_over_gain


@dataclass(frozen=True)
class AdmissionResult:
    """Outcome of the greedy admission pass.

    ``powers`` holds the admitted prefix only (length ``admitted_count``, sorted
    order); rejected users implicitly get zero. ``full_powers()`` expands to all
    ``n_users`` for interference audits and phase-2 hand-off.
    """

    admitted_count: int
    powers: np.ndarray
    remaining_power: float
    budget: float
    n_users: int

    def full_powers(self) -> np.ndarray:
        out = np.zeros(self.n_users)
        out[: self.admitted_count] = self.powers
        return out


def admit(scenario: Scenario, budget: float) -> AdmissionResult:
    """Run the greedy admission pass under a total power budget (watts).

    Returns the admitted prefix with its equality-allocation powers and the
    unspent budget. A first user that alone exceeds the budget yields an empty
    admission (count 0, everything remaining). Admission is inclusive on the
    boundary: a user whose required power exactly equals the remaining budget
    is admitted.
    """
    if not (np.isfinite(budget) and budget > 0.0):
        raise ValueError("budget must be strictly positive and finite")
    thresholds = scenario.su_thresholds
    over_gain = scenario.noise_over_gain
    allocated = 0.0
    powers: list[float] = []
    for n in range(scenario.n_sus):
        required = _required_power(float(thresholds[n]), allocated, float(over_gain[n]))
        if required > budget - allocated:
            break
        powers.append(required)
        allocated += required
    return AdmissionResult(
        admitted_count=len(powers),
        powers=np.asarray(powers, dtype=float),
        remaining_power=budget - allocated,
        budget=float(budget),
        n_users=scenario.n_sus,
    )


def required_prefix_power(scenario: Scenario, k: int) -> float:
    """Total power needed to admit the first k users at exact-threshold SINR.

    Unrolls A_k = A_{k-1} * (1 + Gamma_k) + Gamma_k * N_k / G_k with A_0 = 0.
    """
    if not 1 <= k <= scenario.n_sus:
        raise ValueError(f"k must be in 1..{scenario.n_sus}, got {k}")
    thresholds = scenario.su_thresholds
    over_gain = scenario.noise_over_gain
    total = 0.0
    for n in range(k):
        total += _required_power(float(thresholds[n]), total, float(over_gain[n]))
    return total
