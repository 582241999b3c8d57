"""Polynomial-time exact solvers for the two tractable instance classes:
a scanning budget below every site's total traffic, and uniform compromise
cost with unlimited scanning.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .best_response import AttackView
from .lp import LpProblem, assert_optimal, solve_lp
from .model import TOL, AttackPlan, DefenderStrategy, GameInstance, SolveResult


@dataclass(frozen=True)
class CaseMatch:
    which: str  # "small_effort_budget" | "uniform_cost_unlimited_effort" | "none"
    reason: str


class CaseMismatchError(ValueError):
    pass


def detect_case(instance: GameInstance) -> CaseMatch:
    arrs = instance.arrays()
    if instance.effort_unlimited:
        pi = arrs["pi"]
        if np.all(pi == pi[0]):
            return CaseMatch(
                "uniform_cost_unlimited_effort",
                f"uniform compromise cost {pi[0]} with unlimited scanning budget",
            )
        return CaseMatch("none", "unlimited scanning budget but non-uniform compromise cost")
    min_t_all = float(arrs["t_all"].min())
    if 0.0 < instance.budget_effort <= min_t_all:
        return CaseMatch(
            "small_effort_budget",
            f"B_e = {instance.budget_effort} <= min t_all = {min_t_all}",
        )
    return CaseMatch("none", "no tractable structure detected")


def solve_small_effort(instance: GameInstance) -> SolveResult:
    """Scanning budget fits inside any single site: the attacker puts all
    effort on the best site, so one min-max LP over sites is exact."""
    match = detect_case(instance)
    if match.which != "small_effort_budget":
        raise CaseMismatchError(match.reason)
    t0 = time.perf_counter()
    view = AttackView.of(instance)
    arrs = instance.arrays()
    n = instance.n
    m = view.idx.size
    if m == 0:
        return _trivial_result(instance, "special:small-effort", t0)
    base = arrs["base"][view.idx]
    slope = arrs["slope"][view.idx]
    ct = arrs["ct"][view.idx]
    b_e = instance.budget_effort

    # The attacker puts all effort on the site with the highest per-unit
    # value k_w = base_w - slope_w x_w, so the defender minimizes
    # max_w k_w: water-filling that lowers the highest levels uniformly.
    # cost(v) = sum ct_w x_w(v) with x_w(v) = clip((base_w - v)/slope_w, 0, 1)
    # is nonincreasing in the level v, so bisection finds the lowest
    # affordable level to machine precision.
    def x_at(v: float) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            raw = np.where(slope > 0, (base - v) / np.where(slope > 0, slope, 1.0), 0.0)
        return np.clip(raw, 0.0, 1.0)

    lo = float(np.max(base - slope))  # every site fully altered
    hi = float(base.max())  # no alteration needed
    if float(np.dot(ct, x_at(lo))) <= instance.budget_defender:
        level = lo
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if float(np.dot(ct, x_at(mid))) <= instance.budget_defender:
                hi = mid
            else:
                lo = mid
        level = hi
    x = np.zeros(n)
    x[view.idx] = x_at(level)
    k = view.coeffs(x)
    j_star = int(np.lexsort((np.arange(m), -k))[0])
    y = np.zeros(n)
    e = np.zeros(n)
    value = 0.0
    if k[j_star] > 0:
        y[view.idx[j_star]] = 1.0
        e[view.idx[j_star]] = b_e
        value = float(k[j_star] * b_e)
    return SolveResult(
        strategy=DefenderStrategy(x),
        value=value,
        best_response=AttackPlan(y, e),
        lower_bound=value,
        upper_bound=value,
        method="special:small-effort",
        wall_time=time.perf_counter() - t0,
    )


def solve_uniform_cost(instance: GameInstance) -> SolveResult:
    """Uniform compromise cost and unlimited scanning: minimize the sum of
    the affordable-count largest per-site values via a single LP."""
    match = detect_case(instance)
    if match.which != "uniform_cost_unlimited_effort":
        raise CaseMismatchError(match.reason)
    t0 = time.perf_counter()
    view = AttackView.of(instance)
    arrs = instance.arrays()
    n = instance.n
    m = view.idx.size
    pi_bar = float(arrs["pi"][0])
    count = int(math.floor(instance.budget_attacker / pi_bar + TOL))
    count = min(count, m)
    if m == 0 or count == 0:
        return _trivial_result(instance, "special:uniform-cost", t0)

    # Full-site value is T_w - S_w x_w with T = base * t_all, S = slope * t_all.
    big_t = arrs["base"][view.idx] * view.t_all
    big_s = arrs["slope"][view.idx] * view.t_all
    ct = arrs["ct"][view.idx]

    # Variables: x (m), z, d+ (m).  d+_w >= T_w - S_w x_w - z.
    rows_i, cols_i, vals, rhs, senses = [], [], [], [], []
    for j in range(m):
        rows_i += [j, j, j]
        cols_i += [j, m, m + 1 + j]
        vals += [big_s[j], 1.0, 1.0]
        rhs.append(big_t[j])
        senses.append(">=")
    rows_i += [m] * m
    cols_i += list(range(m))
    vals += list(ct)
    rhs.append(instance.budget_defender)
    senses.append("<=")
    nv = 2 * m + 1
    c = np.zeros(nv)
    c[m] = float(count)
    c[m + 1 :] = 1.0
    lb = np.zeros(nv)
    ub = np.full(nv, np.inf)
    ub[:m] = 1.0
    a = sparse.csr_matrix((vals, (rows_i, cols_i)), shape=(m + 1, nv))
    sol = assert_optimal(solve_lp(LpProblem.build("min", c, a, senses, np.array(rhs), lb, ub)))

    x = np.zeros(n)
    x[view.idx] = np.clip(sol.x[:m], 0.0, 1.0)
    # Best response: the `count` largest full-site values.
    site_vals = big_t - big_s * x[view.idx]
    order = np.lexsort((np.arange(m), -site_vals))[:count]
    order = order[site_vals[order] > 0]
    y = np.zeros(n)
    e = np.zeros(n)
    y[view.idx[order]] = 1.0
    e[view.idx[order]] = view.t_all[order]
    value = float(site_vals[order].sum())
    return SolveResult(
        strategy=DefenderStrategy(x),
        value=value,
        best_response=AttackPlan(y, e),
        lower_bound=value,
        upper_bound=value,
        method="special:uniform-cost",
        wall_time=time.perf_counter() - t0,
    )


def _trivial_result(instance: GameInstance, method: str, t0: float) -> SolveResult:
    return SolveResult(
        strategy=DefenderStrategy.zeros(instance.n),
        value=0.0,
        best_response=AttackPlan.empty(instance.n),
        lower_bound=0.0,
        upper_bound=0.0,
        method=method,
        wall_time=time.perf_counter() - t0,
    )
