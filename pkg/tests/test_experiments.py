"""Experiment harness: determinism, CSV shape, and curve sanity."""

import csv

import pytest

from cybertweak.experiments import ExperimentSpec, run_experiment, tradeoff_points
from conftest import scaled_instance


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


class TestSpec:
    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            ExperimentSpec(name="nope", sizes=(4,))

    def test_bad_trials_rejected(self):
        with pytest.raises(ValueError):
            ExperimentSpec(name="relaxed_gap", sizes=(4,), trials=0)
        with pytest.raises(ValueError):
            ExperimentSpec(name="relaxed_gap", sizes=())


class TestRunExperiment:
    def test_relaxed_gap_outputs(self, tmp_path):
        spec = ExperimentSpec(name="relaxed_gap", sizes=(4,), trials=3, profile="small")
        info = run_experiment(spec, tmp_path)
        table = read_csv(info["table"])
        assert table[0] == ["size", "mean_gap", "sem", "exact"]
        assert len(table) == 2
        plot = read_csv(info["plot"])
        assert plot[0] == ["size", "mean_gap", "sem"]

    def test_bit_for_bit_determinism(self, tmp_path):
        spec = ExperimentSpec(name="relaxed_gap", sizes=(4, 5), trials=3, profile="small")
        a = run_experiment(spec, tmp_path / "a")
        b = run_experiment(spec, tmp_path / "b")
        assert open(a["table"], "rb").read() == open(b["table"], "rb").read()
        assert open(a["plot"], "rb").read() == open(b["plot"], "rb").read()

    def test_dwe_ablation_outputs(self, tmp_path):
        spec = ExperimentSpec(name="dwe_ablation", sizes=(200,), trials=3)
        info = run_experiment(spec, tmp_path)
        table = read_csv(info["table"])
        assert table[0] == ["size", "mean_eliminated_fraction", "sem"]
        frac = float(table[1][1])
        assert 0.0 <= frac <= 1.0

    def test_greedy_alpha_outputs(self, tmp_path):
        spec = ExperimentSpec(name="greedy_alpha", sizes=(6,), trials=3, profile="small")
        info = run_experiment(spec, tmp_path)
        table = read_csv(info["table"])
        assert [r[0] for r in table[1:]] == ["pi", "pi_ba_be", "one"]


class TestTradeoff:
    def test_endpoints_and_monotone(self):
        inst = scaled_instance(5, 42)
        pts = tradeoff_points(inst)
        ratios = [r for r, _ in pts]
        utils = [u for _, u in pts]
        assert ratios == [i / 10 for i in range(11)]
        assert utils[0] == pytest.approx(1.0, abs=1e-9)
        assert utils[-1] == pytest.approx(0.0, abs=1e-7)
        for a, b in zip(utils, utils[1:]):
            assert b <= a + 1e-7
