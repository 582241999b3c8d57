"""Column generation for the full game: master LP over accumulated effort
vectors alternating with the attacker's best-response slave, preceded by
dominance elimination, the LP relaxation, and its optimality check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np
from scipy import sparse

from .best_response import (
    AttackView,
    GreedyConfig,
    best_response_greedy,
    best_response_partial,
    best_response_value,
    best_response_value_bounded,
    enumerate_optimal_responses,
    max_effort_column,
)
from .dominance import DominanceReport, find_dominated_websites, reduce_instance
from .lp import LpProblem, assert_optimal, solve_lp
from .model import TOL, AttackPlan, DefenderStrategy, GameInstance, SolveResult
from .relaxation import DEFAULT_EPSILON, check_optimality, initial_columns, solve_relaxed_p1


@dataclass(frozen=True)
class CgConfig:
    slave: str = "exact"  # "exact" | "greedy_then_exact"
    max_iterations: int = 1000
    run_dwe: bool = True
    run_optimality_check: bool = True
    response_cap: int = 50
    epsilon: float = DEFAULT_EPSILON
    time_limit: float | None = None  # wall seconds; None = no limit
    saddle_samples: int = 4000  # mixture columns sampled from the relaxation duals


def solve_master(instance: GameInstance, columns: list[np.ndarray]):
    """Min-max LP over a set of effort vectors; returns (strategy, value).

    The value is a lower bound on the game value as long as all columns are
    feasible attacker plans.
    """
    if not columns:
        raise ValueError("columns must be nonempty")
    arrs = instance.arrays()
    n = instance.n
    base, slope, ct = arrs["base"], arrs["slope"], arrs["ct"]
    # Variables: x (n), v.  Per column: sum slope_w e_w x_w + v >= sum base_w e_w.
    rows = []
    rhs = []
    senses = []
    for e in columns:
        coeff = slope * e
        rows.append(sparse.csr_matrix(np.concatenate([coeff, [1.0]])))
        rhs.append(float(np.dot(base, e)))
        senses.append(">=")
    rows.append(sparse.csr_matrix(np.concatenate([ct, [0.0]])))
    rhs.append(instance.budget_defender)
    senses.append("<=")
    c = np.zeros(n + 1)
    c[n] = 1.0
    lb = np.zeros(n + 1)
    ub = np.concatenate([np.ones(n), [np.inf]])
    problem = LpProblem.build(
        "min", c, sparse.vstack(rows).tocsr(), senses, np.array(rhs), lb, ub
    )
    sol = assert_optimal(solve_lp(problem), "master LP")
    return DefenderStrategy(np.clip(sol.x[:n], 0.0, 1.0)), float(sol.objective)


try:  # incremental simplex with warm-started re-solves
    from scipy.optimize._highspy import _core as _highs_core
except ImportError:  # pragma: no cover - depends on the scipy build
    _highs_core = None


class _MasterLp:
    """Master LP that grows one column cut at a time.

    Re-solves reuse the previous simplex basis, which keeps long
    column-generation runs cheap.  Falls back to rebuilding the LP from
    scratch when the incremental solver bindings are unavailable.
    """

    def __init__(self, instance: GameInstance, columns: list[np.ndarray]):
        self.instance = instance
        self.columns = list(columns)
        self._solver = None
        if _highs_core is not None:
            arrs = instance.arrays()
            n = instance.n
            h = _highs_core._Highs()
            h.setOptionValue("output_flag", False)
            inf = 1e30
            cost = np.zeros(n + 1)
            cost[n] = 1.0
            lb = np.zeros(n + 1)
            ub = np.concatenate([np.ones(n), [inf]])
            h.addCols(
                n + 1,
                cost,
                lb,
                ub,
                0,
                np.zeros(1, dtype=np.int32),
                np.zeros(0, dtype=np.int32),
                np.zeros(0),
            )
            ct = arrs["ct"]
            nz = np.flatnonzero(ct)
            h.addRow(-inf, float(instance.budget_defender), nz.size, nz.astype(np.int32), ct[nz])
            self._solver = h
            self._arrs = arrs
            for e in self.columns:
                self._add_row(e)

    def _add_row(self, e: np.ndarray) -> None:
        arrs = self._arrs
        n = self.instance.n
        coeff = arrs["slope"] * e
        nz = np.flatnonzero(coeff)
        idx = np.concatenate([nz, [n]]).astype(np.int32)
        val = np.concatenate([coeff[nz], [1.0]])
        self._solver.addRow(float(np.dot(arrs["base"], e)), 1e30, idx.size, idx, val)

    def add_column(self, e: np.ndarray) -> None:
        self.columns.append(e)
        if self._solver is not None:
            self._add_row(e)

    def solve(self) -> tuple[DefenderStrategy, float]:
        if self._solver is None:
            return solve_master(self.instance, self.columns)
        h = self._solver
        h.run()
        if h.getModelStatus() != _highs_core.HighsModelStatus.kOptimal:
            # Numerical trouble in the warm-started path: rebuild cleanly.
            return solve_master(self.instance, self.columns)
        x = np.asarray(h.getSolution().col_value)[: self.instance.n]
        return DefenderStrategy(np.clip(x, 0.0, 1.0)), float(h.getObjectiveValue())


def _column_key(e: np.ndarray) -> tuple:
    quantum = TOL * (1.0 + np.abs(e).max(initial=0.0))
    return tuple(np.round(e / max(quantum, 1e-300)).astype(np.int64).tolist())


def saddle_sample_columns(
    instance: GameInstance,
    relax,
    count: int = 4000,
    seed: int = 0,
) -> list[np.ndarray]:
    """Effort columns sampled from the relaxed saddle point.

    The row duals of the relaxation LP give the attacker's saddle strategy:
    fractional compromise marginals over (often) a hundred-plus sites.  The
    integer game's optimal mixture spreads over budget-feasible subsets of
    that support, so sampling subsets site-by-site with those marginals and
    refilling leftover attack budget reconstructs most of the mixture's
    convex hull up front, instead of discovering it one cut at a time.
    """
    view = AttackView.of(instance)
    y_full = relax.duals.get("y")
    if y_full is None or view.idx.size == 0:
        return []
    y = np.clip(y_full[view.idx], 0.0, 1.0)
    fractional = (y > 1e-9) & (y < 1.0 - 1e-9)
    if np.count_nonzero(fractional) < 10:
        return []
    k = view.coeffs(relax.x_hat.x)
    pi = view.pi
    rng = np.random.default_rng(seed)
    columns: list[np.ndarray] = []
    seen: set[tuple] = set()
    support = y > 1e-9
    for _ in range(count):
        pick = rng.random(y.size) < y
        idx = np.flatnonzero(pick)
        perm = rng.permutation(idx)
        kept = perm[np.cumsum(pi[perm]) <= view.b_a]
        leftover = view.b_a - float(pi[kept].sum())
        rest = np.flatnonzero(~pick & support)
        rperm = rng.permutation(rest)
        refill = rperm[np.cumsum(pi[rperm]) <= leftover]
        chosen = np.sort(np.concatenate([kept, refill]))
        e = max_effort_column(view, k, chosen)
        key = _column_key(e)
        if key not in seen:
            seen.add(key)
            columns.append(e)
    return columns


def cybertweak(instance: GameInstance, config: CgConfig = CgConfig()) -> SolveResult:
    return _tweak(instance, config, greedy_slave=config.slave == "greedy_then_exact")


def greedytweak(instance: GameInstance, config: CgConfig = CgConfig()) -> SolveResult:
    return _tweak(instance, replace(config, slave="greedy_then_exact"), greedy_slave=True)


def _tweak(instance: GameInstance, config: CgConfig, greedy_slave: bool) -> SolveResult:
    t0 = time.perf_counter()
    eliminated: frozenset[str] = frozenset()
    work = instance
    keep = np.arange(instance.n)
    if config.run_dwe:
        report: DominanceReport = find_dominated_websites(instance)
        eliminated = report.eliminated
        work, keep = reduce_instance(instance, report)

    method = "greedytweak" if greedy_slave else "cybertweak"
    relax = solve_relaxed_p1(work)
    x_hat = relax.x_hat
    responses = enumerate_optimal_responses(work, x_hat, cap=config.response_cap)

    if config.run_optimality_check:
        verdict = check_optimality(work, x_hat, responses, epsilon=config.epsilon)
        if verdict == "proven_optimal":
            value = relax.exact_response_value
            plan, _ = best_response_value(work, x_hat)
            return _expanded_result(
                instance,
                keep,
                x_hat,
                value,
                plan,
                lower=value,
                upper=value,
                method=method,
                iterations=0,
                columns=len(responses),
                eliminated=eliminated,
                status="proven_optimal",
                t0=t0,
            )

    view = AttackView.of(work)
    columns: list[np.ndarray] = initial_columns(work, x_hat, responses)
    seen = {_column_key(e) for e in columns}
    if config.saddle_samples > 0:
        for e in saddle_sample_columns(work, relax, count=config.saddle_samples):
            key = _column_key(e)
            if key not in seen:
                seen.add(key)
                columns.append(e)
    if not columns:
        columns = [np.zeros(work.n)]
        seen = {_column_key(columns[0])}
    master = _MasterLp(work, columns)

    if len(columns) > 500:
        # The sampled mixture support is deliberately oversized; after one
        # master solve only the near-binding columns matter, and pruning the
        # rest keeps later re-solves cheap.
        x0, v0 = master.solve()
        k0 = view.coeffs(x0.x)
        vals = np.array([float(np.dot(k0, e[view.idx])) for e in columns])
        keep_mask = vals >= v0 - 1e-3 * (1.0 + abs(v0))
        if np.count_nonzero(keep_mask) < len(columns):
            columns = [e for e, m in zip(columns, keep_mask) if m]
            if not columns:
                columns = [np.zeros(work.n)]
            seen = {_column_key(e) for e in columns}
            master = _MasterLp(work, columns)

    best_x, best_ub = x_hat, relax.exact_response_value
    master_v = 0.0
    iterations = 0
    status = "iteration_limit"
    x = x_hat
    while iterations < config.max_iterations:
        if config.time_limit is not None and time.perf_counter() - t0 > config.time_limit:
            status = "time_limit"
            break
        iterations += 1
        x, master_v = master.solve()
        k = view.coeffs(x.x)

        new_column = None
        if greedy_slave:
            gplan = best_response_greedy(work, x, GreedyConfig("pi"))
            ge = max_effort_column(view, k, np.flatnonzero(gplan.e[view.idx] > 0))
            gkey = _column_key(ge)
            if gkey not in seen:
                gval = float(np.dot(k, ge[view.idx]))
                if gval > master_v + TOL * (1.0 + abs(gval)):
                    new_column, key = ge, gkey
        if new_column is None:
            plan, ub, certified = best_response_partial(work, x)
            e = max_effort_column(view, k, np.flatnonzero(plan.e[view.idx] > 0))
            key = _column_key(e)
            if certified:
                if ub < best_ub:
                    best_x, best_ub = x, ub
                if ub <= master_v + TOL * (1.0 + abs(ub)):
                    status = "optimal"
                    best_x, best_ub = x, ub
                    break
                if key in seen:
                    # Numerically stalled: the exact slave reproduced a
                    # known column while a gap remains.
                    status = "iteration_limit"
                    break
                new_column = e
            else:
                col_val = float(np.dot(k, e[view.idx]))
                if key not in seen and col_val > master_v + TOL * (1.0 + abs(col_val)):
                    # The truncated search already produced a violated cut;
                    # certifying the response can wait until progress stops.
                    new_column = e
                else:
                    plan, ub, ub_cert = best_response_value_bounded(work, x)
                    # Only certified values may tighten the upper bound:
                    # a truncated response can undershoot the true optimum.
                    if ub_cert < best_ub:
                        best_x, best_ub = x, ub_cert
                    if ub_cert <= master_v + TOL * (1.0 + abs(ub_cert)) or ub <= master_v + TOL * (
                        1.0 + abs(ub)
                    ):
                        status = "optimal"
                        best_x = x
                        best_ub = min(best_ub, ub_cert)
                        break
                    e = max_effort_column(view, k, np.flatnonzero(plan.e[view.idx] > 0))
                    key = _column_key(e)
                    if key in seen:
                        status = "iteration_limit"
                        break
                    new_column = e
        seen.add(key)
        master.add_column(new_column)

    plan, value = best_response_value(work, best_x)
    return _expanded_result(
        instance,
        keep,
        best_x,
        value,
        plan,
        lower=master_v,
        upper=best_ub,
        method=method,
        iterations=iterations,
        columns=len(master.columns),
        eliminated=eliminated,
        status=status,
        t0=t0,
    )


def _expanded_result(
    instance: GameInstance,
    keep: np.ndarray,
    x: DefenderStrategy,
    value: float,
    plan: AttackPlan,
    *,
    lower: float,
    upper: float,
    method: str,
    iterations: int,
    columns: int,
    eliminated: frozenset[str],
    status: str,
    t0: float,
) -> SolveResult:
    n = instance.n
    fx = np.zeros(n)
    fy = np.zeros(n)
    fe = np.zeros(n)
    fx[keep] = x.x
    fy[keep] = plan.y
    fe[keep] = plan.e
    return SolveResult(
        strategy=DefenderStrategy(fx),
        value=value,
        best_response=AttackPlan(fy, fe),
        lower_bound=min(lower, value),
        upper_bound=max(upper, value) if status == "iteration_limit" else value,
        method=method,
        iterations=iterations,
        wall_time=time.perf_counter() - t0,
        eliminated=eliminated,
        status="proven_optimal" if status == "proven_optimal" else ("optimal" if status == "optimal" else status),
        columns=columns,
    )
