"""Experiment harness: regenerates the benchmark tables and figure data at
desk scale, emitting CSV aggregates and plot data reproducible from
(spec, seed).
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .best_response import GreedyConfig, best_response_greedy, best_response_value
from .colgen import CgConfig, cybertweak, greedytweak
from .dominance import find_dominated_websites
from .model import (
    DefenderStrategy,
    GameInstance,
    UNLIMITED,
    generate_instance,
    generate_small_effort_instance,
    response_value,
)
from .relaxation import solve_relaxed_p1
from .special_cases import solve_small_effort, solve_uniform_cost

EXPERIMENTS = (
    "relaxed_gap",
    "runtime_scaling",
    "tradeoff_curve",
    "greedy_alpha",
    "tractable_scaling",
    "dwe_ablation",
)


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    sizes: tuple[int, ...]
    trials: int = 20
    seed: int = 0
    profile: str = "standard"

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment: {self.name!r}")
        if self.trials < 1 or not self.sizes:
            raise ValueError("trials >= 1 and at least one size required")


def _trial_seed(spec: ExperimentSpec, size: int, trial: int) -> int:
    return hash((spec.seed, size, trial)) & 0x7FFFFFFF


def _mean_sem(values: list[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    if len(values) < 2:
        return mean, 0.0
    return mean, statistics.stdev(values) / len(values) ** 0.5


def run_experiment(spec: ExperimentSpec, out_dir) -> dict:
    """Run one experiment; writes <name>_table.csv and <name>_plot.csv."""
    runner = {
        "relaxed_gap": _relaxed_gap,
        "runtime_scaling": _runtime_scaling,
        "tradeoff_curve": _tradeoff_curve,
        "greedy_alpha": _greedy_alpha,
        "tractable_scaling": _tractable_scaling,
        "dwe_ablation": _dwe_ablation,
    }[spec.name]
    header, rows, plot_header, plot_rows = runner(spec)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / f"{spec.name}_table.csv"
    plot_path = out_dir / f"{spec.name}_plot.csv"
    for path, head, data in ((table_path, header, rows), (plot_path, plot_header, plot_rows)):
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(head)
            writer.writerows(data)
    return {"table": str(table_path), "plot": str(plot_path), "rows": len(rows)}


def _exact_value(instance: GameInstance) -> float:
    return cybertweak(instance, CgConfig(run_dwe=False, run_optimality_check=False)).value


def _relaxed_gap(spec: ExperimentSpec):
    rows = []
    plot_rows = []
    for size in spec.sizes:
        gaps = []
        exact_count = 0
        for trial in range(spec.trials):
            inst = generate_instance(size, spec.profile, _trial_seed(spec, size, trial))
            relax = solve_relaxed_p1(inst)
            opt = _exact_value(inst)
            heur = relax.exact_response_value
            gap = 0.0 if opt <= 0 else max(0.0, (heur - opt) / opt)
            gaps.append(gap)
            if gap < 1e-4:
                exact_count += 1
        mean, sem = _mean_sem(gaps)
        rows.append([size, mean, sem, f"{exact_count}/{spec.trials}"])
        plot_rows.append([size, mean, sem])
    return (
        ["size", "mean_gap", "sem", "exact"],
        rows,
        ["size", "mean_gap", "sem"],
        plot_rows,
    )


def _runtime_scaling(spec: ExperimentSpec):
    rows = []
    plot_rows = []
    solvers = {
        "cybertweak": lambda i: cybertweak(i, CgConfig(run_dwe=False, run_optimality_check=False)),
        "greedytweak": lambda i: greedytweak(i, CgConfig(run_dwe=False, run_optimality_check=False)),
        "relaxed": lambda i: solve_relaxed_p1(i),
    }
    for size in spec.sizes:
        times: dict[str, list[float]] = {name: [] for name in solvers}
        for trial in range(spec.trials):
            inst = generate_instance(size, spec.profile, _trial_seed(spec, size, trial))
            for name, fn in solvers.items():
                t0 = time.perf_counter()
                fn(inst)
                times[name].append(time.perf_counter() - t0)
        for name in solvers:
            mean, sem = _mean_sem(times[name])
            rows.append([size, name, mean, sem])
            plot_rows.append([size, name, mean, sem])
    return (
        ["size", "solver", "mean_seconds", "sem"],
        rows,
        ["size", "solver", "mean_seconds", "sem"],
        plot_rows,
    )


def tradeoff_points(instance: GameInstance, ratios=None) -> list[tuple[float, float]]:
    """(budget ratio, utility ratio) samples of the security/degradation curve."""
    if ratios is None:
        ratios = [i / 10 for i in range(11)]
    full = instance.max_defender_budget
    base_value = _exact_value(instance.with_budget_defender(0.0))
    points = []
    for r in ratios:
        value = _exact_value(instance.with_budget_defender(r * full))
        points.append((r, 0.0 if base_value <= 0 else value / base_value))
    return points


def _tradeoff_curve(spec: ExperimentSpec):
    ratios = [i / 10 for i in range(11)]
    rows = []
    plot_rows = []
    for size in spec.sizes:
        per_ratio: dict[float, list[float]] = {r: [] for r in ratios}
        for trial in range(spec.trials):
            inst = generate_instance(size, spec.profile, _trial_seed(spec, size, trial))
            for r, u in tradeoff_points(inst, ratios):
                per_ratio[r].append(u)
        for r in ratios:
            mean, sem = _mean_sem(per_ratio[r])
            rows.append([size, r, mean, sem])
            plot_rows.append([r, mean, sem])
    return (
        ["size", "budget_ratio", "utility_ratio", "stderr"],
        rows,
        ["budget_ratio", "utility_ratio", "stderr"],
        plot_rows,
    )


def _greedy_alpha(spec: ExperimentSpec):
    # The weighting rules are compared at the relaxed defender policy —
    # the operating point the greedy slave actually sees during column
    # generation.  The "unit" profile keeps a site's traffic at O(1) so
    # that both terms of the normalized weight are active.
    alphas = ("pi", "pi_ba_be", "one")
    rows = []
    per_alpha: dict[str, list[float]] = {a: [] for a in alphas}
    for size in spec.sizes:
        for trial in range(spec.trials):
            inst = generate_instance(size, spec.profile, _trial_seed(spec, size, trial))
            x = solve_relaxed_p1(inst).x_hat
            _, opt = best_response_value(inst, x)
            if opt <= 0:
                continue
            for a in alphas:
                plan = best_response_greedy(inst, x, GreedyConfig(a))
                val = response_value(inst, x, plan.e)
                per_alpha[a].append(max(0.0, (opt - val) / opt))
    for a in alphas:
        mean, sem = _mean_sem(per_alpha[a]) if per_alpha[a] else (0.0, 0.0)
        rows.append([a, mean, sem])
    return (["alpha", "mean_gap", "sem"], rows, ["alpha", "mean_gap", "sem"], rows)


def _tractable_scaling(spec: ExperimentSpec):
    rows = []
    for size in spec.sizes:
        small_times = []
        uniform_times = []
        for trial in range(spec.trials):
            seed = _trial_seed(spec, size, trial)
            small = generate_small_effort_instance(size, seed)
            t0 = time.perf_counter()
            solve_small_effort(small)
            small_times.append(time.perf_counter() - t0)
            uni = replace(
                generate_instance(size, "large_split", seed), budget_effort=UNLIMITED
            )
            t0 = time.perf_counter()
            solve_uniform_cost(uni)
            uniform_times.append(time.perf_counter() - t0)
        rows.append([size, "small_effort", *(_mean_sem(small_times))])
        rows.append([size, "uniform_cost", *(_mean_sem(uniform_times))])
    head = ["size", "case", "mean_seconds", "sem"]
    return (head, rows, head, rows)


def _dwe_ablation(spec: ExperimentSpec):
    rows = []
    for size in spec.sizes:
        fractions = []
        for trial in range(spec.trials):
            inst = generate_instance(size, "large_split", _trial_seed(spec, size, trial))
            report = find_dominated_websites(inst)
            fractions.append(len(report.eliminated) / inst.n)
        mean, sem = _mean_sem(fractions)
        rows.append([size, mean, sem])
    head = ["size", "mean_eliminated_fraction", "sem"]
    return (head, rows, head, rows)
