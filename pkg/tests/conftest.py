import numpy as np
import pytest

from noma_crn import Scenario


@pytest.fixture
def two_equal_users() -> Scenario:
    """Two users with unit gain/noise and unit SINR threshold."""
    return Scenario([1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [], [], 100.0)


def make_scenario(gains, noise, thresholds, p_max=1.0, pu_gains=(), pu_limits=()) -> Scenario:
    gains = np.asarray(gains, dtype=float)
    order = np.argsort(-gains, kind="stable")
    return Scenario(
        gains[order],
        np.asarray(noise, dtype=float)[order],
        np.asarray(thresholds, dtype=float)[order],
        pu_gains,
        pu_limits,
        p_max,
        order=order,
    )


def random_admitted_instance(rng, max_users=8, thr_db_range=(0.0, 25.0),
                             slack_exponent_range=(-3.0, 1.0)):
    """A random sorted instance plus a budget that keeps it threshold-feasible."""
    from noma_crn import min_power_for_targets

    n = int(rng.integers(1, max_users + 1))
    gains = np.sort(10 ** rng.uniform(-8, -3, n))[::-1]
    noise = 10 ** rng.uniform(-16, -12, n)
    thresholds = 10 ** (rng.uniform(*thr_db_range, n) / 10)
    scenario = Scenario(gains, noise, thresholds, [], [], 1.0)
    required, _ = min_power_for_targets(scenario, scenario.su_thresholds)
    budget = required * 10 ** rng.uniform(*slack_exponent_range)
    return scenario, max(budget, required)
