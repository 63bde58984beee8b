"""End-to-end convenience: budget, admission, then max-min redistribution."""

from __future__ import annotations

from dataclasses import dataclass

from .admission import AdmissionResult, admit
from .maxmin import DEFAULT_EPSILON, MaxMinSolution, solve_bisection, solve_waterfill
from .model import Scenario, power_budget

__all__ = ["TwoPhaseResult", "run_two_phase"]

_SOLVERS = {"bisection": solve_bisection, "waterfill": solve_waterfill}


@dataclass(frozen=True)
class TwoPhaseResult:
    """Budget, admission outcome and (when anyone was admitted) the phase-2 solution."""

    budget: float
    admission: AdmissionResult
    maxmin: MaxMinSolution | None


def run_two_phase(scenario: Scenario, *, solver: str = "waterfill",
                  epsilon: float = DEFAULT_EPSILON) -> TwoPhaseResult:
    """Derive the budget, admit greedily, then lift the admitted users' SINR."""
    if solver not in _SOLVERS:
        raise ValueError(f"solver must be one of {sorted(_SOLVERS)}, got {solver!r}")
    budget = power_budget(scenario)
    admission = admit(scenario, budget)
    solution = None
    if admission.admitted_count >= 1:
        restricted = scenario.prefix(admission.admitted_count)
        solution = _SOLVERS[solver](restricted, budget, epsilon)
    return TwoPhaseResult(budget=budget, admission=admission, maxmin=solution)
