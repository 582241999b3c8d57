"""Attacker best-response solvers: exact branch-and-bound, exact DP,
greedy heuristic, and the LP relaxation with dual certificates.

All solvers operate on the attackable sites only (pi_w <= B_a); other
sites can never carry effort and are reported with y = e = 0.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .model import TOL, AttackPlan, DefenderStrategy, GameInstance


class ScaleLossyError(ValueError):
    """Raised when integer scaling of compromise costs loses precision."""


@dataclass(frozen=True)
class GreedyConfig:
    """Tie-ranking rule for the greedy response: alpha in the ratio k_w / alpha_w."""

    alpha: str = "pi"  # "pi" | "pi_ba_be" | "one"


@dataclass
class AttackView:
    """Attackable-site slice of an instance, with per-site objective slopes."""

    instance: GameInstance
    idx: np.ndarray  # attackable site indices into the full instance
    t_all: np.ndarray
    pi: np.ndarray
    b_a: float
    b_e: float  # effective effort budget: min(B_e, total attackable capacity)

    @staticmethod
    def of(instance: GameInstance) -> "AttackView":
        mask = instance.attackable_mask()
        idx = np.flatnonzero(mask)
        arrs = instance.arrays()
        t_all = arrs["t_all"][idx]
        capacity = float(t_all.sum())
        b_e = min(instance.budget_effort, capacity)
        return AttackView(
            instance=instance,
            idx=idx,
            t_all=t_all,
            pi=arrs["pi"][idx],
            b_a=float(instance.budget_attacker),
            b_e=b_e,
        )

    def coeffs(self, x: np.ndarray) -> np.ndarray:
        """Per-unit-effort objective coefficient k_w at defender strategy x."""
        arrs = self.instance.arrays()
        k = arrs["base"] - arrs["slope"] * np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return np.maximum(k[self.idx], 0.0)

    def to_plan(self, chosen: np.ndarray, e_local: np.ndarray) -> AttackPlan:
        n = self.instance.n
        y = np.zeros(n)
        e = np.zeros(n)
        active = e_local > 0
        y[self.idx[chosen[active]]] = 1.0
        e[self.idx[chosen[active]]] = e_local[active]
        return AttackPlan(y, e)


def canonical_fill(view: AttackView, k: np.ndarray, chosen: np.ndarray, budget: float):
    """Greedy effort fill of a compromise set in decreasing-k order.

    Ties in k break by site index, so the output is deterministic and has
    at most one partially scanned site.  Returns (order, efforts, value).
    """
    chosen = np.asarray(chosen, dtype=int)
    order = chosen[np.lexsort((chosen, -k[chosen]))]
    caps = view.t_all[order]
    cum = np.cumsum(caps)
    efforts = np.clip(budget - (cum - caps), 0.0, caps)
    value = float(np.dot(k[order], efforts))
    return order, efforts, value


def _fill_value(view, k, chosen, budget) -> float:
    return canonical_fill(view, k, chosen, budget)[2]


def _plan_from_set(view: AttackView, k: np.ndarray, chosen) -> tuple[AttackPlan, float]:
    chosen = np.asarray(sorted(chosen), dtype=int)
    if chosen.size == 0:
        return AttackPlan.empty(view.instance.n), 0.0
    order, efforts, value = canonical_fill(view, k, chosen, view.b_e)
    return view.to_plan(order, efforts), value


def _relaxation_bound(
    k: np.ndarray,
    t_all: np.ndarray,
    pi: np.ndarray,
    committed: np.ndarray,
    free: np.ndarray,
    b_e: float,
    b_a_left: float,
) -> float:
    """Two-dimensional fractional knapsack bound over committed + free sites.

    Committed sites already paid their compromise cost; free sites pay
    fractionally.  Valid upper bound for every completion of the node.
    """
    sel = np.concatenate([committed, free])
    if sel.size == 0:
        return 0.0
    gains = k[sel] * t_all[sel]
    n_c = committed.size
    # Single-constraint fractional bound on the effort budget.
    dens_e = gains / t_all[sel]
    order = np.argsort(-dens_e, kind="stable")
    caps = t_all[sel][order]
    frac = np.clip(b_e - (np.cumsum(caps) - caps), 0.0, caps) / caps
    bound_e = float(np.dot(gains[order], frac))
    if not (b_a_left < np.inf) or free.size == 0:
        return bound_e
    # Single-constraint fractional bound on the compromise budget.
    w = pi[free]
    g_free = k[free] * t_all[free]
    dens_a = g_free / np.maximum(w, 1e-300)
    o2 = np.argsort(-dens_a, kind="stable")
    take = np.clip(b_a_left - (np.cumsum(w[o2]) - w[o2]), 0.0, w[o2]) / w[o2]
    bound_a = float(np.dot(g_free[o2], take)) + float(
        np.dot(k[committed], t_all[committed])
    )
    best = min(bound_e, bound_a)
    # Lagrangian mixtures of the two knapsack duals; each evaluation of
    # b_e lam1 + b_a lam2 + sum max(0, g - lam1 a - lam2 w) is a valid upper
    # bound for the two-constraint relaxation and often much tighter.
    crit_e = int(np.searchsorted(np.cumsum(caps), b_e))
    lam1 = float(dens_e[order[min(crit_e, order.size - 1)]])
    crit_a = int(np.searchsorted(np.cumsum(w[o2]), b_a_left))
    lam2 = float(dens_a[o2[min(crit_a, o2.size - 1)]])
    a_cost = t_all[sel]
    w_cost = np.concatenate([np.zeros(n_c), w])
    for t in (0.5, 0.25, 0.75):
        l1, l2 = t * lam1, (1.0 - t) * lam2
        slack = gains - l1 * a_cost - l2 * w_cost
        cand = b_e * l1 + b_a_left * l2 + float(slack[slack > 0].sum())
        if cand < best:
            best = cand
    return best


def best_response_greedy(
    instance: GameInstance, x: DefenderStrategy, config: GreedyConfig = GreedyConfig()
) -> AttackPlan:
    """Greedy heuristic: take sites in decreasing r_w = k_w / alpha_w with
    maximum effort allowed until either budget runs out."""
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    if config.alpha == "pi":
        alpha = view.pi
    elif config.alpha == "pi_ba_be":
        inv_be = 0.0 if instance.effort_unlimited else 1.0 / max(instance.budget_effort, 1e-300)
        alpha = view.pi / max(view.b_a, 1e-300) + inv_be
    elif config.alpha == "one":
        alpha = np.ones_like(view.pi)
    else:
        raise ValueError(f"unknown alpha rule: {config.alpha!r}")
    r = k / np.maximum(alpha, 1e-300)
    order = np.lexsort((np.arange(k.size), -r))
    remaining_a = view.b_a
    remaining_e = view.b_e
    chosen: list[int] = []
    efforts: list[float] = []
    for j in order:
        if remaining_e <= 0:
            break
        if view.pi[j] <= remaining_a:
            take = min(remaining_e, view.t_all[j])
            if take <= 0 or k[j] <= 0:
                continue
            chosen.append(int(j))
            efforts.append(take)
            remaining_a -= view.pi[j]
            remaining_e -= take
    return view.to_plan(np.array(chosen, dtype=int), np.array(efforts))


class SearchLimitReached(RuntimeError):
    """Raised when the exact search exhausts its node budget.

    Carries the best incumbent found so far; its value is achievable but
    not certified optimal.
    """

    def __init__(self, message: str, incumbent: np.ndarray | None = None):
        super().__init__(message)
        self.incumbent = incumbent if incumbent is not None else np.empty(0, dtype=int)


def _branch_and_bound(
    view: AttackView,
    k: np.ndarray,
    collect: bool = False,
    cap: int = 50,
    node_cap: int = 4_000,
    window: float = 0.0,
    tie_cap: int = 2_000,
    soft_limit: bool = False,
):
    """Exact search over compromise sets with greedy effort fill.

    Returns (best_set, best_value, ties) where ties is a list of
    near-optimal sets (only populated when ``collect``).  ``window`` widens
    the collection band to a relative margin below the optimum; with
    ``soft_limit`` the node cap truncates the search instead of raising, so
    callers that only want a column harvest still get one.
    """
    pos = np.flatnonzero(k > 0)
    if pos.size == 0 or view.b_e <= 0 or view.b_a <= 0:
        return np.empty(0, dtype=int), 0.0, []

    # Fast path: if the effort-only greedy fill is affordable it is optimal.
    order_k = pos[np.lexsort((pos, -k[pos]))]
    caps = view.t_all[order_k]
    cum = np.cumsum(caps)
    efforts = np.clip(view.b_e - (cum - caps), 0.0, caps)
    touched = order_k[efforts > 0]
    if float(view.pi[touched].sum()) <= view.b_a + TOL * (1 + view.b_a) and not collect:
        return touched, _fill_value(view, k, touched, view.b_e), []

    # Branch order: decreasing value density per unit compromise cost.
    branch = pos[np.lexsort((pos, -(k[pos] / view.pi[pos])))]
    greedy_plan = best_response_greedy(
        view.instance, DefenderStrategy(_expand_x(view, k)), GreedyConfig("pi")
    )
    inc_set = np.flatnonzero(greedy_plan.e[view.idx] > 0)
    inc_val = _fill_value(view, k, inc_set, view.b_e) if inc_set.size else 0.0
    best_set, best_val = inc_set, inc_val

    tie_tol = (TOL + window) * (1.0 + abs(best_val))
    safety = 1e-9 * (1.0 + abs(best_val))
    ties: dict[tuple, float] = {}
    nodes = 0
    # Stack entries: (depth, committed tuple, pi_used)
    stack = [(0, (), 0.0)]
    while stack:
        depth, committed, pi_used = stack.pop()
        nodes += 1
        if nodes > node_cap:
            if soft_limit:
                break
            raise SearchLimitReached(
                f"exceeded {node_cap} nodes", np.asarray(best_set, dtype=int)
            )
        comm = np.array(committed, dtype=int)
        # Evaluate the committed set as a candidate.
        val = _fill_value(view, k, comm, view.b_e) if comm.size else 0.0
        if val > best_val + safety:
            best_val, best_set = val, comm
            tie_tol = (TOL + window) * (1.0 + abs(best_val))
            safety = 1e-9 * (1.0 + abs(best_val))
        if collect and comm.size and val >= best_val - tie_tol and len(ties) < tie_cap:
            ties[tuple(sorted(map(int, comm)))] = val
        if depth >= branch.size:
            continue
        free = branch[depth:]
        free = free[view.pi[free] <= view.b_a - pi_used + TOL]
        if free.size == 0:
            continue
        bound = _relaxation_bound(
            k, view.t_all, view.pi, comm, free, view.b_e, view.b_a - pi_used
        )
        if collect:
            if bound * (1.0 + 1e-9) + safety <= best_val - tie_tol:
                continue
        else:
            # Prune subtrees tied with the incumbent (within bound noise);
            # otherwise degenerate instances with many equal coefficients
            # force the search through every interchangeable optimum.
            if bound <= best_val + 4.0 * safety:
                continue
        nxt = int(branch[depth])
        # Skip branch first so the include branch is explored first (LIFO).
        stack.append((depth + 1, committed, pi_used))
        if view.pi[nxt] <= view.b_a - pi_used + TOL:
            stack.append((depth + 1, committed + (nxt,), pi_used + float(view.pi[nxt])))
    tie_sets = [s for s, v in ties.items() if v >= best_val - tie_tol]
    return np.asarray(best_set, dtype=int), best_val, tie_sets


def _expand_x(view: AttackView, k: np.ndarray) -> np.ndarray:
    """Defender strategy whose coefficients over the view reproduce k (for
    seeding the greedy incumbent); sites outside the view get x = 0."""
    arrs = view.instance.arrays()
    x = np.zeros(view.instance.n)
    slope = arrs["slope"][view.idx]
    base = arrs["base"][view.idx]
    with np.errstate(divide="ignore", invalid="ignore"):
        xv = np.where(slope > 0, (base - k) / np.where(slope > 0, slope, 1.0), 0.0)
    x[view.idx] = np.clip(xv, 0.0, 1.0)
    return x


def _milp_best_set(view: AttackView, k: np.ndarray) -> tuple[np.ndarray, float]:
    """Near-optimal compromise set via mixed-integer programming.

    Fallback for instances where the combinatorial search degenerates (many
    tied coefficients).  Variables are [e (m), y (m)] with y binary.  Returns
    the chosen set together with a certified upper bound on the true optimum.
    The node limit keeps runs deterministic and bounded; on limit hits the
    incumbent is returned and the dual bound reports the remaining gap.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp

    m = view.idx.size
    c = np.concatenate([-k, np.zeros(m)])
    eye = sparse.eye(m, format="csr")
    rows = sparse.vstack(
        [
            sparse.hstack([sparse.csr_matrix(np.ones((1, m))), sparse.csr_matrix((1, m))]),
            sparse.hstack([sparse.csr_matrix((1, m)), sparse.csr_matrix(view.pi[None, :])]),
            sparse.hstack([eye, sparse.diags(-view.t_all)]),
        ]
    )
    ub = np.concatenate([[view.b_e, view.b_a], np.zeros(m)])
    constraint = LinearConstraint(rows, -np.inf, ub)
    bounds = Bounds(np.zeros(2 * m), np.concatenate([view.t_all, np.ones(m)]))
    integrality = np.concatenate([np.zeros(m), np.ones(m)])
    res = milp(
        c,
        constraints=constraint,
        bounds=bounds,
        integrality=integrality,
        options={"mip_rel_gap": 1e-7, "node_limit": 2000},
    )
    if res.x is None:
        raise RuntimeError(f"best-response MILP failed: {res.message}")
    e = res.x[:m]
    chosen = np.flatnonzero((np.round(res.x[m:]) > 0) & (e > TOL) & (k > 0))
    return chosen, float(-res.mip_dual_bound)


def _best_set(view: AttackView, k: np.ndarray) -> tuple[np.ndarray, float | None]:
    """Best compromise set plus a certified upper bound when the exact
    search had to fall back to the gap-tolerant MIP (None when exact)."""
    try:
        best_set, _, _ = _branch_and_bound(view, k)
        return best_set, None
    except SearchLimitReached:
        return _milp_best_set(view, k)


def best_response_partial(
    instance: GameInstance, x: DefenderStrategy, node_cap: int = 800
) -> tuple[AttackPlan, float, bool]:
    """Cheap response oracle: (plan, value, certified).

    ``certified`` is True when the search completed exactly within its node
    budget; otherwise the plan is the best incumbent found and its value is
    achievable but possibly below the true optimum.
    """
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    try:
        chosen, _, _ = _branch_and_bound(view, k, node_cap=node_cap)
        certified = True
    except SearchLimitReached as exc:
        chosen, certified = exc.incumbent, False
    plan, value = _plan_from_set(view, k, chosen)
    return plan, value, certified


def best_response_exact(instance: GameInstance, x: DefenderStrategy) -> AttackPlan:
    """Optimal attack plan via branch-and-bound, in canonical greedy form."""
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    chosen, _ = _best_set(view, k)
    plan, _ = _plan_from_set(view, k, chosen)
    return plan


def best_response_dp(instance: GameInstance, x: DefenderStrategy, scale: int = 1) -> AttackPlan:
    """Exact pseudo-polynomial DP over the integer-scaled compromise budget.

    Sites are processed in decreasing-k order so effort inside each state is
    allocated greedily; per-budget states keep a Pareto frontier of
    (effort used, value) pairs with backpointers.
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    pi_scaled = np.rint(view.pi * scale).astype(np.int64)
    if np.any(np.abs(pi_scaled / scale - view.pi) > TOL * (1 + view.pi)):
        raise ScaleLossyError("pi values are not exactly representable at this scale")
    budget = int(math.floor(view.b_a * scale + TOL))
    pos = np.flatnonzero(k > 0)
    if pos.size == 0 or view.b_e <= 0 or budget <= 0:
        return AttackPlan.empty(instance.n)
    order = pos[np.lexsort((pos, -k[pos]))]

    # states[b] = list of (effort_used, value, chosen tuple), Pareto-pruned.
    states: dict[int, list[tuple[float, float, tuple]]] = {0: [(0.0, 0.0, ())]}
    for j in order:
        w = int(pi_scaled[j])
        additions: dict[int, list[tuple[float, float, tuple]]] = {}
        for b, frontier in states.items():
            nb = b + w
            if nb > budget:
                continue
            for eff, val, chosen in frontier:
                room = view.b_e - eff
                if room <= 0:
                    continue
                take = min(view.t_all[j], room)
                additions.setdefault(nb, []).append(
                    (eff + take, val + float(k[j]) * take, chosen + (int(j),))
                )
        for nb, items in additions.items():
            merged = states.get(nb, []) + items
            merged.sort(key=lambda s: (s[0], -s[1]))
            pruned: list[tuple[float, float, tuple]] = []
            best = -np.inf
            for eff, val, chosen in merged:
                if val > best + 1e-15:
                    pruned.append((eff, val, chosen))
                    best = val
            states[nb] = pruned

    best_chosen: tuple = ()
    best_val = 0.0
    for frontier in states.values():
        for _, val, chosen in frontier:
            if val > best_val:
                best_val, best_chosen = val, chosen
    plan, _ = _plan_from_set(view, k, best_chosen)
    return plan


def best_response_relaxed(instance: GameInstance, x: DefenderStrategy):
    """LP relaxation of the best response; returns (plan, value, duals).

    Duals: lambda1 (effort budget), lambda2 (compromise budget), nu per site
    (effort/compromise linking), eta per site (y <= 1).  The returned vertex
    has at most two fractional compromise values.
    """
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    m = view.idx.size
    n = instance.n
    duals = {
        "lambda1": 0.0,
        "lambda2": 0.0,
        "nu": np.zeros(n),
        "eta": np.zeros(n),
    }
    if m == 0:
        return AttackPlan.empty(n), 0.0, duals
    # Variables: e (m), y (m).
    c = np.concatenate([-k, np.zeros(m)])
    rows = []
    rhs = []
    if not instance.effort_unlimited:
        rows.append(np.concatenate([np.ones(m), np.zeros(m)]))
        rhs.append(instance.budget_effort)
    rows.append(np.concatenate([np.zeros(m), view.pi]))
    rhs.append(view.b_a)
    link = sparse.hstack([sparse.eye(m), sparse.diags(-view.t_all)])
    a_ub = sparse.vstack([sparse.csr_matrix(np.array(rows)), link]).tocsr()
    b_ub = np.concatenate([np.array(rhs), np.zeros(m)])
    bounds = [(0.0, None)] * m + [(0.0, 1.0)] * m
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"relaxed best response failed: {res.message}")
    e_loc = res.x[:m]
    y_loc = res.x[m:]
    marg = -res.ineqlin.marginals  # shadow prices of the maximization problem
    pos = 0
    if not instance.effort_unlimited:
        duals["lambda1"] = float(marg[0])
        pos = 1
    duals["lambda2"] = float(marg[pos])
    duals["nu"][view.idx] = marg[pos + 1 :]
    duals["eta"][view.idx] = -res.upper.marginals[m:]
    e = np.zeros(n)
    y = np.zeros(n)
    e[view.idx] = e_loc
    y[view.idx] = y_loc
    return AttackPlan(y, e), float(-res.fun), duals


def max_effort_column(view: AttackView, k: np.ndarray, seed_set) -> np.ndarray:
    """Canonical max effort vector: fill the seed set in decreasing-k order,
    then extend with further affordable sites until the effort budget (or
    the affordable capacity) is exhausted."""
    chosen = list(dict.fromkeys(int(i) for i in seed_set))
    pi_used = float(view.pi[chosen].sum()) if chosen else 0.0
    order, efforts, _ = (
        canonical_fill(view, k, np.array(chosen, dtype=int), view.b_e)
        if chosen
        else (np.empty(0, dtype=int), np.empty(0), 0.0)
    )
    used = float(efforts.sum())
    if used < view.b_e - TOL * (1 + view.b_e):
        rest = np.setdiff1d(np.arange(view.idx.size), np.array(chosen, dtype=int))
        rest = rest[np.lexsort((rest, -k[rest]))]
        for j in rest:
            if used >= view.b_e - TOL * (1 + view.b_e):
                break
            if view.pi[j] <= view.b_a - pi_used + TOL:
                chosen.append(int(j))
                pi_used += float(view.pi[j])
                used += min(view.t_all[j], view.b_e - used)
        order, efforts, _ = canonical_fill(view, k, np.array(chosen, dtype=int), view.b_e)
    e = np.zeros(view.instance.n)
    e[view.idx[order]] = efforts
    return e


def near_optimal_columns(
    instance: GameInstance,
    x: DefenderStrategy,
    window: float = 1e-3,
    cap: int = 400,
    node_cap: int = 50_000,
) -> list[np.ndarray]:
    """Canonical effort columns whose value at ``x`` lies within a relative
    ``window`` of the best response.  At a minimax optimum the attacker's
    mixture is supported on columns exactly tied at the optimal strategy, so
    harvesting near-ties in bulk seeds a master LP with (most of) that
    support in one shot.  Heuristic: the search is node-capped and truncates
    silently, so the harvest may be incomplete."""
    view = AttackView.of(instance)
    if view.idx.size == 0:
        return []
    k = view.coeffs(x.x)
    best_set, _, ties = _branch_and_bound(
        view,
        k,
        collect=True,
        node_cap=node_cap,
        window=window,
        tie_cap=max(cap, 1),
        soft_limit=True,
    )
    columns: list[np.ndarray] = []
    seen: set[tuple] = set()
    for s in [tuple(sorted(map(int, best_set)))] + list(ties):
        e = max_effort_column(view, k, np.asarray(s, dtype=int))
        key = tuple(np.round(e, 9))
        if key in seen:
            continue
        seen.add(key)
        columns.append(e)
        if len(columns) >= cap:
            break
    return columns


def tied_swap_sets(view: AttackView, k: np.ndarray, base_set, tie_tol: float):
    """Yield compromise sets that swap one site of ``base_set`` for an unused
    site with a matching coefficient; on degenerate instances these are the
    interchangeable near-optima."""
    arr = np.asarray(base_set, dtype=int)
    if arr.size == 0:
        return
    unused = np.ones(view.idx.size, dtype=bool)
    unused[arr] = False
    pi_used = float(view.pi[arr].sum())
    for out_site in arr:
        budget_left = view.b_a - pi_used + float(view.pi[out_site])
        cand = np.flatnonzero(
            unused
            & (np.abs(k - k[out_site]) <= tie_tol)
            & (view.pi <= budget_left + TOL)
        )
        rest = [int(i) for i in arr if i != out_site]
        for u in cand:
            yield rest + [int(u)]


def enumerate_optimal_responses(
    instance: GameInstance, x: DefenderStrategy, cap: int = 50
) -> list[AttackPlan]:
    """Up to ``cap`` distinct canonical plans achieving the optimum within
    tolerance.  A bounded under-approximation: always contains at least one
    optimal plan."""
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    collect_bnb = view.idx.size <= 64
    try:
        best_set, best_val, ties = _branch_and_bound(view, k, collect=collect_bnb, node_cap=20_000)
    except SearchLimitReached:
        # Degenerate tie structure: fall back to an exact MIP for the optimum
        # and skip exhaustive tie collection (the swap expansion below still
        # recovers coefficient-tied alternatives).
        best_set, _ = _milp_best_set(view, k)
        _, best_val = _plan_from_set(view, k, best_set)
        ties = {}
    tie_tol = TOL * (1.0 + abs(best_val))

    plans: dict[tuple, AttackPlan] = {}

    def add_set(s) -> bool:
        if len(plans) >= cap:
            return False
        plan, val = _plan_from_set(view, k, s)
        if val < best_val - tie_tol:
            return True
        key = tuple(np.round(plan.e, 9))
        plans.setdefault(key, plan)
        return len(plans) < cap

    add_set(best_set)
    for s in ties:
        if not add_set(s):
            break

    # Swap expansion: exchange effort-carrying sites for unused sites with
    # matching coefficients; catches tied optima on large instances.
    base_sets = [tuple(sorted(map(int, best_set)))] + list(ties)
    for s in base_sets[:5]:
        for swapped in tied_swap_sets(view, k, s, tie_tol):
            if not add_set(swapped):
                return list(plans.values())
    return list(plans.values())


def best_response_value(instance: GameInstance, x: DefenderStrategy) -> tuple[AttackPlan, float]:
    """Exact best response together with its objective value."""
    plan, value, _ = best_response_value_bounded(instance, x)
    return plan, value


def best_response_value_bounded(
    instance: GameInstance, x: DefenderStrategy
) -> tuple[AttackPlan, float, float]:
    """Best response, its value, and a certified upper bound on the optimum.

    The bound equals the value when the search finished exactly; it is the
    MIP dual bound when the gap-tolerant fallback resolved the response.
    """
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    chosen, upper = _best_set(view, k)
    plan, value = _plan_from_set(view, k, chosen)
    return plan, value, max(value, upper) if upper is not None else value
