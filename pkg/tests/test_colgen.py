"""Column-generation solvers: master LP, exact and greedy-slave variants."""

import numpy as np
import pytest

from cybertweak.baselines import solve_all_actions
from cybertweak.colgen import CgConfig, cybertweak, greedytweak, solve_master
from cybertweak.model import UNLIMITED, DefenderStrategy, generate_instance
from conftest import brute_force_response_value, make_instance, scaled_instance


class TestSolveMaster:
    def test_zero_columns_gives_zero_value(self):
        inst = scaled_instance(4, 0)
        x, v = solve_master(inst, [np.zeros(inst.n)])
        assert v == pytest.approx(0.0, abs=1e-9)
        assert DefenderStrategy(x.x).is_feasible(inst)

    def test_single_column_full_budget(self):
        # One effort column, enough budget to fully alter its site: value 0.
        inst = make_instance([(10, 20, 1, 1)], b_d=10, b_a=1, b_e=20)
        e = np.array([20.0])
        x, v = solve_master(inst, [e])
        assert x.x[0] == pytest.approx(1.0, abs=1e-7)
        assert v == pytest.approx(0.0, abs=1e-7)

    def test_master_value_lower_bounds_exact(self, example_instance):
        # The master optimizes against a column subset, so its value can
        # only undershoot the true best response at the returned strategy.
        from cybertweak.best_response import AttackView, max_effort_column

        view = AttackView.of(example_instance)
        k = view.coeffs(np.zeros(example_instance.n))
        cols = [max_effort_column(view, k, np.array([0, 1]))]
        x, v = solve_master(example_instance, cols)
        assert v <= brute_force_response_value(example_instance, x) + 1e-7


class TestCybertweak:
    def test_zero_defender_budget(self):
        # Nothing can be altered, so the value is the unimpeded best response.
        inst = scaled_instance(5, 7).with_budget_defender(0.0)
        res = cybertweak(inst)
        zero = DefenderStrategy.zeros(inst.n)
        assert res.value == pytest.approx(brute_force_response_value(inst, zero), rel=1e-9)
        assert np.allclose(res.strategy.x, 0.0, atol=1e-7)

    def test_full_defender_budget(self):
        inst = scaled_instance(5, 8)
        inst = inst.with_budget_defender(inst.max_defender_budget)
        res = cybertweak(inst)
        assert res.value == pytest.approx(0.0, abs=1e-6)

    def test_matches_all_actions_small(self):
        for seed in range(6):
            inst = scaled_instance(4, 40 + seed)
            ct = cybertweak(inst)
            aa = solve_all_actions(inst)
            assert ct.value == pytest.approx(aa.value, rel=1e-6, abs=1e-9)

    def test_zero_attacker_budget_one_iteration(self):
        inst = make_instance(
            [(10, 20, 1, 5), (5, 5, 1, 6)], b_d=3, b_a=0.0, b_e=10
        )
        res = cybertweak(inst)
        assert res.value == pytest.approx(0.0, abs=1e-9)
        assert res.iterations <= 1

    def test_unlimited_effort(self):
        inst = make_instance(
            [(10, 10, 1, 5), (7, 7, 1, 4), (4, 4, 1, 3)],
            b_d=5,
            b_a=7,
            b_e=UNLIMITED,
        )
        res = cybertweak(inst)
        assert res.value == pytest.approx(brute_force_response_value(inst, res.strategy), rel=1e-9)
        assert res.lower_bound <= res.value + 1e-7
        assert res.value <= res.upper_bound + 1e-7

    def test_strategy_feasible_and_bounds_ordered(self):
        for seed in range(5):
            inst = generate_instance(12, profile="small", seed=seed)
            res = cybertweak(inst)
            assert res.strategy.is_feasible(inst)
            assert res.lower_bound <= res.value + 1e-6 * (1 + abs(res.value))
            assert res.value <= res.upper_bound + 1e-6 * (1 + abs(res.value))

    def test_iteration_limit_reported(self):
        inst = generate_instance(30, profile="standard", seed=3)
        res = cybertweak(inst, config=CgConfig(max_iterations=2))
        assert res.status in ("iteration_limit", "optimal")
        assert res.iterations <= 2


class TestGreedytweak:
    def test_matches_cybertweak(self):
        # The greedy slave only changes which columns arrive first; both
        # variants terminate with the exact value.
        for seed in range(5):
            inst = scaled_instance(5, 60 + seed)
            gv = greedytweak(inst).value
            cv = cybertweak(inst).value
            assert gv == pytest.approx(cv, rel=1e-6, abs=1e-9)
