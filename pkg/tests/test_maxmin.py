import math

import numpy as np
import pytest

from noma_crn import (
    InfeasibleError,
    Scenario,
    admit,
    compute_sinr,
    feasible,
    min_power_for_targets,
    solve_bisection,
    solve_waterfill,
    total_power_curve,
)
from noma_crn.maxmin import _curve_total

from conftest import random_admitted_instance


def unit_pair(thresholds=(1.0, 1.0)) -> Scenario:
    return Scenario([1.0, 1.0], [1.0, 1.0], list(thresholds), [], [], 1e6)


class TestMinPowerForTargets:
    def test_single_user(self):
        total, powers = min_power_for_targets(Scenario([1.0], [1.0], [1.0], [], [], 10.0), [1.0])
        assert total == 1.0
        np.testing.assert_array_equal(powers, [1.0])

    def test_two_users_unit_targets(self):
        total, powers = min_power_for_targets(unit_pair(), [1.0, 1.0])
        np.testing.assert_allclose(powers, [1.0, 2.0])
        assert total == pytest.approx(3.0)
        np.testing.assert_allclose(compute_sinr(unit_pair(), powers), [1.0, 1.0], rtol=1e-12)

    def test_two_users_target_two(self):
        total, powers = min_power_for_targets(unit_pair(), [2.0, 2.0])
        np.testing.assert_allclose(powers, [2.0, 6.0])
        assert total == pytest.approx(8.0)
        np.testing.assert_allclose(compute_sinr(unit_pair(), powers), [2.0, 2.0], rtol=1e-12)

    def test_targets_are_hit_exactly_on_random_instances(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            scenario, _ = random_admitted_instance(rng)
            targets = 10 ** (rng.uniform(0, 25, scenario.n_sus) / 10)
            _, powers = min_power_for_targets(scenario, targets)
            np.testing.assert_allclose(compute_sinr(scenario, powers), targets, rtol=1e-12)

    def test_bad_targets_rejected(self):
        with pytest.raises(ValueError):
            min_power_for_targets(unit_pair(), [1.0])
        with pytest.raises(ValueError):
            min_power_for_targets(unit_pair(), [1.0, 0.0])


class TestTotalPowerCurve:
    def test_reference_points(self):
        assert total_power_curve(unit_pair(), 1.0) == pytest.approx(3.0)
        assert total_power_curve(unit_pair(), 2.0) == pytest.approx(8.0)

    def test_constant_below_smallest_threshold(self):
        s = unit_pair(thresholds=(2.0, 1.5))
        at_thresholds, _ = min_power_for_targets(s, s.su_thresholds)
        for theta in (0.1, 0.5, 1.0, 1.5):
            assert total_power_curve(s, theta) == pytest.approx(at_thresholds, rel=1e-15)

    def test_strictly_increasing_beyond_smallest_threshold(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            scenario, _ = random_admitted_instance(rng)
            lo = float(np.min(scenario.su_thresholds))
            thetas = lo * 10 ** np.sort(rng.uniform(0.01, 2, 5))
            values = [total_power_curve(scenario, t) for t in thetas]
            assert all(b > a for a, b in zip(values, values[1:]))

    def test_scalar_fast_path_matches_array_path_bitwise(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            scenario, _ = random_admitted_instance(rng)
            theta = float(10 ** rng.uniform(-1, 3))
            fast = _curve_total(scenario.su_thresholds.tolist(),
                                scenario.noise_over_gain.tolist(), theta)
            assert fast == total_power_curve(scenario, theta)


class TestFeasible:
    def test_reference_cases(self):
        assert feasible(unit_pair(), 1.0, 3.0) is True
        assert feasible(unit_pair(), 2.0, 3.0) is False

    def test_below_thresholds_reduces_to_phase1_feasibility(self):
        s = unit_pair(thresholds=(1.25, 1.0))
        required, _ = min_power_for_targets(s, s.su_thresholds)
        assert feasible(s, 0.5, required)

    def test_monotone_in_t(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            scenario, budget = random_admitted_instance(rng)
            t_hi = float(10 ** rng.uniform(-1, 4))
            t_lo = t_hi * rng.uniform(0.1, 1.0)
            if feasible(scenario, t_hi, budget):
                assert feasible(scenario, t_lo, budget)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(ValueError):
            feasible(unit_pair(), 0.0, 1.0)


class TestSolversOnKnownInstances:
    def test_quadratic_root_budget_seven(self, two_equal_users):
        expected = math.sqrt(8.0) - 1.0
        b = solve_bisection(two_equal_users, 7.0)
        w = solve_waterfill(two_equal_users, 7.0)
        assert w.theta_star == pytest.approx(expected, abs=1e-12)
        assert abs(b.theta_star - expected) <= 1e-6
        np.testing.assert_allclose(w.powers, [expected, 7.0 - expected], rtol=1e-9)

    def test_segment_boundary_hit_exactly(self):
        s = unit_pair(thresholds=(2.0, 1.0))
        w = solve_waterfill(s, 8.0)
        assert w.theta_star == pytest.approx(2.0, abs=1e-12)
        np.testing.assert_allclose(w.powers, [2.0, 6.0], rtol=1e-12)
        np.testing.assert_allclose(w.achieved_sinr, [2.0, 2.0], rtol=1e-12)

    def test_above_all_thresholds_quadratic(self):
        s = unit_pair(thresholds=(2.0, 1.0))
        w = solve_waterfill(s, 9.0)
        assert w.theta_star == pytest.approx(math.sqrt(10.0) - 1.0, abs=1e-12)
        b = solve_bisection(s, 9.0)
        assert abs(b.theta_star - w.theta_star) <= 1e-6

    def test_zero_slack_keeps_everyone_at_threshold(self, two_equal_users):
        w = solve_waterfill(two_equal_users, 3.0)
        b = solve_bisection(two_equal_users, 3.0)
        assert w.theta_star == 1.0
        assert b.theta_star == 1.0
        np.testing.assert_allclose(w.powers, [1.0, 2.0], rtol=1e-12)

    def test_single_user_takes_whole_budget_exactly(self):
        s = Scenario([2.0], [0.5], [1.0], [], [], 100.0)
        w = solve_waterfill(s, 5.0)
        assert w.theta_star == 5.0 * 2.0 / 0.5
        np.testing.assert_array_equal(w.powers, [5.0])
        b = solve_bisection(s, 5.0)
        assert abs(b.theta_star - w.theta_star) <= 1e-6

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            solve_waterfill(Scenario([], [], [], [], [], 1.0), 1.0)
        with pytest.raises(ValueError):
            solve_bisection(Scenario([], [], [], [], [], 1.0), 1.0)

    def test_budget_below_requirement_is_infeasible(self, two_equal_users):
        with pytest.raises(InfeasibleError):
            solve_waterfill(two_equal_users, 2.9)
        with pytest.raises(InfeasibleError):
            solve_bisection(two_equal_users, 2.9)

    def test_bad_epsilon_rejected(self, two_equal_users):
        with pytest.raises(ValueError):
            solve_bisection(two_equal_users, 7.0, epsilon=0.0)


class TestSolverProperties:
    def test_solvers_agree_and_satisfy_characterization(self):
        rng = np.random.default_rng(1234)
        eps = 1e-6
        for _ in range(150):
            scenario, budget = random_admitted_instance(rng)
            b = solve_bisection(scenario, budget, eps)
            w = solve_waterfill(scenario, budget, eps)
            assert abs(b.theta_star - w.theta_star) <= 2 * eps
            scale = 10 * eps * float(np.max(scenario.noise_over_gain))
            np.testing.assert_allclose(b.powers, w.powers, atol=scale, rtol=1e-6)
            for sol in (b, w):
                expected = np.maximum(sol.theta_star, scenario.su_thresholds)
                np.testing.assert_allclose(sol.achieved_sinr, expected, rtol=1e-6)
                assert sol.powers.sum() == pytest.approx(budget, rel=1e-9)
                assert sol.theta_star >= float(np.min(scenario.su_thresholds))
                assert np.all(sol.powers >= 0.0)

    def test_iteration_count_matches_interval_halving(self):
        rng = np.random.default_rng(77)
        for _ in range(50):
            scenario, budget = random_admitted_instance(rng)
            eps = float(10 ** rng.uniform(-8, -4))
            sol = solve_bisection(scenario, budget, eps)
            lo = float(np.min(scenario.su_thresholds))
            hi = max(float(np.max(budget * scenario.su_gains / scenario.su_noise)), lo)
            width = hi - lo
            expected = 0 if width <= eps else math.ceil(math.log2(width / eps))
            assert sol.iterations == expected

    def test_theta_monotone_in_budget(self):
        rng = np.random.default_rng(15)
        for _ in range(30):
            scenario, budget = random_admitted_instance(rng)
            w1 = solve_waterfill(scenario, budget)
            w2 = solve_waterfill(scenario, budget * rng.uniform(1.0, 10.0))
            assert w2.theta_star >= w1.theta_star - 1e-12 * w1.theta_star

    def test_phase2_after_phase1_never_drops_anyone_below_threshold(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            scenario, _ = random_admitted_instance(rng, max_users=6)
            budget = 10 ** rng.uniform(-6, 0)
            adm = admit(scenario, budget)
            if adm.admitted_count == 0:
                continue
            sub = scenario.prefix(adm.admitted_count)
            sol = solve_waterfill(sub, budget)
            assert np.all(sol.achieved_sinr >= sub.su_thresholds * (1 - 1e-9))
            # Phase 2 only ever adds power on top of the phase-1 allocation.
            assert np.all(sol.powers >= adm.powers * (1 - 1e-12))

    def test_waterfill_iterations_count_flooded_levels(self):
        s = unit_pair(thresholds=(2.0, 1.0))
        # theta* between the two levels: no level fully flooded.
        assert solve_waterfill(s, 7.0).iterations == 0
        # theta* beyond the top level: the one step up to it was completed.
        assert solve_waterfill(s, 9.0).iterations == 1
