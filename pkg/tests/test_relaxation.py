import numpy as np
import pytest

from cybertweak.baselines import solve_all_actions
from cybertweak.best_response import best_response_relaxed, best_response_value, enumerate_optimal_responses
from cybertweak.colgen import CgConfig, cybertweak
from cybertweak.model import UNLIMITED, DefenderStrategy, generate_instance
from cybertweak.relaxation import bound_certificate, check_optimality, solve_relaxed_p1
from conftest import make_instance, scaled_instance


def with_unlimited_effort(inst):
    from dataclasses import replace

    return replace(inst, budget_effort=UNLIMITED)


class TestRelaxedP1:
    def test_full_budget_alters_everything(self):
        inst = scaled_instance(5, 1)
        inst = inst.with_budget_defender(inst.max_defender_budget)
        res = solve_relaxed_p1(inst)
        attackable = inst.attackable_mask()
        assert np.allclose(res.x_hat.x[attackable], 1.0, atol=1e-7)
        assert res.hat_value == pytest.approx(0.0, abs=1e-7)

    def test_zero_budget_matches_relaxed_response(self):
        inst = scaled_instance(6, 2).with_budget_defender(0.0)
        res = solve_relaxed_p1(inst)
        _, relaxed_at_zero, _ = best_response_relaxed(
            inst, DefenderStrategy(np.zeros(inst.n))
        )
        assert res.hat_value == pytest.approx(relaxed_at_zero, abs=1e-6)

    def test_exact_response_below_hat_value(self):
        for seed in range(20):
            inst = scaled_instance(6, 100 + seed)
            res = solve_relaxed_p1(inst)
            assert res.exact_response_value <= res.hat_value + 1e-7

    def test_unlimited_effort_accepted(self):
        inst = make_instance(
            [(10, 20, 1, 2), (5, 5, 2, 3), (8, 40, 1, 2)],
            b_d=20,
            b_a=4,
            b_e=UNLIMITED,
        )
        res = solve_relaxed_p1(inst)
        assert res.hat_value >= res.exact_response_value - 1e-7
        assert res.duals["lambda1"] == 0.0


class TestOptimalityCheck:
    def test_zero_value_is_proven(self):
        inst = scaled_instance(5, 3)
        inst = inst.with_budget_defender(inst.max_defender_budget)
        res = solve_relaxed_p1(inst)
        plans = enumerate_optimal_responses(inst, res.x_hat)
        assert check_optimality(inst, res.x_hat, plans) == "proven_optimal"

    def test_large_instances_usually_proven(self):
        from cybertweak.dominance import find_dominated_websites, reduce_instance

        proven = 0
        for seed in range(5):
            inst = generate_instance(2000, profile="large_split", seed=seed)
            inst, _ = reduce_instance(inst, find_dominated_websites(inst))
            res = solve_relaxed_p1(inst)
            plans = enumerate_optimal_responses(inst, res.x_hat)
            proven += check_optimality(inst, res.x_hat, plans) == "proven_optimal"
        assert proven >= 2

    def test_small_instances_with_gap_stay_unknown(self):
        # A relaxation gap implies the check must not certify the point.
        found_gap = False
        for seed in range(30):
            inst = generate_instance(4, profile="standard", seed=seed)
            res = solve_relaxed_p1(inst)
            opt = cybertweak(inst).value
            if res.exact_response_value > opt * 1.02:
                found_gap = True
                plans = enumerate_optimal_responses(inst, res.x_hat)
                assert check_optimality(inst, res.x_hat, plans) == "unknown"
        assert found_gap

    def test_never_certifies_suboptimal(self):
        # Soundness: whenever proven, column generation agrees.
        for seed in range(20):
            inst = scaled_instance(6, 500 + seed)
            res = solve_relaxed_p1(inst)
            plans = enumerate_optimal_responses(inst, res.x_hat)
            if check_optimality(inst, res.x_hat, plans) == "proven_optimal":
                opt = cybertweak(inst, CgConfig(run_optimality_check=False)).value
                assert res.exact_response_value == pytest.approx(opt, abs=1e-6)


class TestBoundCertificate:
    def test_after_full_solve_bounds_collapse(self):
        inst = scaled_instance(6, 11)
        result = cybertweak(inst)
        assert result.upper_bound - result.lower_bound <= 1e-6

    def test_relaxation_only_upper(self):
        inst = scaled_instance(6, 12)
        res = solve_relaxed_p1(inst)
        lower, upper = bound_certificate(inst, res.x_hat, hat_value=res.hat_value)
        assert lower == 0.0
        assert upper == pytest.approx(min(res.exact_response_value, res.hat_value))

    def test_bound_chain_small_instances(self):
        for seed in range(20):
            inst = scaled_instance(5, 700 + seed)
            opt = solve_all_actions(inst)
            res = solve_relaxed_p1(inst)
            _, resp_at_xstar, _ = best_response_relaxed(inst, opt.strategy)
            assert opt.value <= res.exact_response_value + 1e-6
            assert res.exact_response_value <= res.hat_value + 1e-6
            assert res.hat_value <= resp_at_xstar + 1e-6


class TestApproximationFactor:
    def test_three_approx_large_effort(self):
        for seed in range(20):
            inst = scaled_instance(5, 300 + seed)
            top = inst.arrays()["t_all"].max()
            inst = inst if inst.budget_effort >= top else None
            if inst is None:
                continue
            hat = solve_relaxed_p1(inst).hat_value
            opt = cybertweak(inst).value
            assert hat <= 3 * opt + 1e-6

    def test_two_approx_unlimited_effort(self):
        for seed in range(20):
            inst = scaled_instance(5, 400 + seed)
            inst = with_unlimited_effort(inst)
            hat = solve_relaxed_p1(inst).hat_value
            opt = cybertweak(inst).value
            assert hat <= 2 * opt + 1e-6
