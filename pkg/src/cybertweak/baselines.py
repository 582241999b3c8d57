"""Exponential-scale reference solvers: enumerate-everything baselines used
as correctness oracles and experiment foils.  Both return the exact game
value on instances small enough to enumerate.
"""

from __future__ import annotations

import time

import numpy as np
from scipy.optimize import linprog

from .best_response import AttackView, best_response_value
from .colgen import solve_master
from .model import AttackPlan, DefenderStrategy, GameInstance, SolveResult

DEFAULT_HARD_CAP = 200_000


class CapExceededError(RuntimeError):
    def __init__(self, count: int):
        super().__init__(f"enumeration exceeded the hard cap (found {count} objects)")
        self.count = count


def _enumerate_max_effort_vectors(view: AttackView, hard_cap: int) -> list[np.ndarray]:
    """All canonical effort vectors: a fully scanned set plus at most one
    partially scanned site, exhausting the scanning budget or the
    affordable capacity."""
    n = view.instance.n
    m = view.idx.size
    t_all = view.t_all
    pi = view.pi
    b_e = view.b_e
    b_a = view.b_a
    columns: list[np.ndarray] = []

    def emit(full: list[int], partial: int | None, residual: float):
        e = np.zeros(n)
        for j in full:
            e[view.idx[j]] = t_all[j]
        if partial is not None:
            e[view.idx[partial]] = residual
        columns.append(e)
        if len(columns) > hard_cap:
            raise CapExceededError(len(columns))

    def rec(start: int, full: list[int], cap_used: float, pi_used: float):
        residual = b_e - cap_used
        if residual <= 1e-12:
            emit(full, None, 0.0)
            return
        # Partial completions: any remaining affordable site with room.
        extendable = False
        for p in range(m):
            if p in full_set or pi[p] > b_a - pi_used:
                continue
            extendable = True
            if residual < t_all[p] - 1e-12:
                emit(full, p, residual)
        if not extendable:
            # Capacity-limited maximal set.
            emit(full, None, 0.0)
        for j in range(start, m):
            if pi[j] > b_a - pi_used or cap_used + t_all[j] > b_e + 1e-12:
                continue
            full.append(j)
            full_set.add(j)
            rec(j + 1, full, cap_used + t_all[j], pi_used + pi[j])
            full_set.discard(j)
            full.pop()

    full_set: set[int] = set()
    rec(0, [], 0.0, 0.0)
    # Deduplicate exact-capacity corner cases.
    uniq: dict[tuple, np.ndarray] = {}
    for e in columns:
        uniq.setdefault(tuple(np.round(e, 9)), e)
    return list(uniq.values())


def solve_max_effort(instance: GameInstance, hard_cap: int = DEFAULT_HARD_CAP) -> SolveResult:
    """Solve the full min-max LP over every canonical effort vector at once."""
    t0 = time.perf_counter()
    view = AttackView.of(instance)
    if view.idx.size == 0 or view.b_e <= 0:
        columns = [np.zeros(instance.n)]
    else:
        columns = _enumerate_max_effort_vectors(view, hard_cap)
        if not columns:
            columns = [np.zeros(instance.n)]
    x, v = solve_master(instance, columns)
    plan, value = best_response_value(instance, x)
    return SolveResult(
        strategy=x,
        value=value,
        best_response=plan,
        lower_bound=v,
        upper_bound=value,
        method="max-effort",
        columns=len(columns),
        wall_time=time.perf_counter() - t0,
    )


def solve_all_actions(instance: GameInstance, hard_cap: int = DEFAULT_HARD_CAP) -> SolveResult:
    """One LP per assumed best-response pair (compromise set, partial site),
    with dominance constraints forcing the assumption; minimum over the
    feasible subproblems is the exact game value."""
    t0 = time.perf_counter()
    view = AttackView.of(instance)
    arrs = instance.arrays()
    n = instance.n
    m = view.idx.size
    t_all, pi = view.t_all, view.pi
    b_e = instance.budget_effort
    b_a = view.b_a

    # Enumerate budget-feasible compromise sets and their (set, partial) pairs.
    z_vectors: list[np.ndarray] = []
    count = 0
    sets: list[tuple[int, ...]] = []

    def rec(start: int, chosen: list[int], pi_used: float):
        nonlocal count
        sets.append(tuple(chosen))
        count += 1
        if count * max(m, 1) > hard_cap:
            raise CapExceededError(count * max(m, 1))
        for j in range(start, m):
            if pi[j] <= b_a - pi_used:
                chosen.append(j)
                rec(j + 1, chosen, pi_used + pi[j])
                chosen.pop()

    rec(0, [], 0.0)
    seen: dict[tuple, bool] = {}
    for a_star in sets:
        for w_star in a_star:
            others = [j for j in a_star if j != w_star]
            cap_others = float(t_all[others].sum()) if others else 0.0
            z_partial = min(b_e - cap_others, float(t_all[w_star]))
            if z_partial <= 0:
                continue  # overcommitted scanning; pair infeasible
            z = np.zeros(n)
            for j in others:
                z[view.idx[j]] = t_all[j]
            z[view.idx[w_star]] = z_partial
            key = tuple(np.round(z, 9))
            if key not in seen:
                seen[key] = True
                z_vectors.append(z)

    if not z_vectors:
        x0 = DefenderStrategy.zeros(n)
        return SolveResult(
            strategy=x0,
            value=0.0,
            best_response=AttackPlan.empty(n),
            lower_bound=0.0,
            upper_bound=0.0,
            method="all-actions",
            wall_time=time.perf_counter() - t0,
        )

    base, slope, ct = arrs["base"], arrs["slope"], arrs["ct"]
    z_mat = np.array(z_vectors)  # P x n
    sz = z_mat * slope  # P x n
    bz = z_mat @ base  # P

    best: tuple[float, np.ndarray] | None = None
    p_count = z_mat.shape[0]
    for p in range(p_count):
        # Variables: x (n), v.
        obj_row = np.concatenate([sz[p], [1.0]])
        dom_rows = np.column_stack([sz - sz[p], np.zeros(p_count)])
        dom_rhs = bz - bz[p]
        mask = np.arange(p_count) != p
        a_ub_rows = [np.concatenate([ct, [0.0]])[None, :]]
        b_ub = [instance.budget_defender]
        # v >= bz_p - sz_p.x  ->  -(sz_p.x + v) <= -bz_p
        a_ub_rows.append(-obj_row[None, :])
        b_ub.append(-bz[p])
        # dominance: sz_q.x - sz_p.x >= bz_q - bz_p  ->  -(...) <= -(rhs)
        a_ub_rows.append(-dom_rows[mask])
        b_ub += list(-dom_rhs[mask])
        a_ub = np.vstack(a_ub_rows)
        bounds = [(0.0, 1.0)] * n + [(0.0, None)]
        c = np.zeros(n + 1)
        c[n] = 1.0
        res = linprog(c, A_ub=a_ub, b_ub=np.array(b_ub), bounds=bounds, method="highs")
        if res.status != 0:
            continue  # infeasible subproblem: assumption unenforceable
        if best is None or res.fun < best[0]:
            best = (float(res.fun), np.clip(res.x[:n], 0.0, 1.0))

    if best is None:
        raise RuntimeError("all best-response subproblems infeasible")
    x = DefenderStrategy(best[1])
    plan, value = best_response_value(instance, x)
    return SolveResult(
        strategy=x,
        value=value,
        best_response=plan,
        lower_bound=best[0],
        upper_bound=value,
        method="all-actions",
        columns=p_count,
        wall_time=time.perf_counter() - t0,
    )
