"""Bounded-variable linear programs with primal and dual solutions.

Every LP formulation in the solver suite goes through :func:`solve_lp`,
which is backed by the HiGHS simplex via scipy.  Duals and reduced costs
are reported in the problem's own sense: for a maximization problem the
dual of a binding <= row is nonnegative, and the reduced cost of a
variable at its upper bound is nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .model import TOL


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpError(RuntimeError):
    """Numerical breakdown or malformed problem."""


@dataclass
class LpProblem:
    """min/max c.x  s.t.  A x {<=,=,>=} b,  lb <= x <= ub (ub may be inf)."""

    sense: str  # "min" | "max"
    c: np.ndarray
    a_rows: sparse.csr_matrix
    row_senses: list[str]  # "<=", ">=", "="
    b: np.ndarray
    lb: np.ndarray
    ub: np.ndarray  # np.inf for unbounded above

    @staticmethod
    def build(sense, c, rows, row_senses, b, lb, ub) -> "LpProblem":
        c = np.asarray(c, dtype=float)
        b = np.asarray(b, dtype=float)
        lb = np.asarray(lb, dtype=float)
        ub = np.asarray(ub, dtype=float)
        a = rows if sparse.issparse(rows) else sparse.csr_matrix(np.atleast_2d(rows))
        if a.shape[0] != len(b) or len(b) != len(row_senses):
            raise LpError("row dimension mismatch")
        if a.shape[1] != len(c) and a.shape[0] > 0:
            raise LpError("column dimension mismatch")
        if len(lb) != len(c) or len(ub) != len(c):
            raise LpError("bound dimension mismatch")
        if not np.all(np.isfinite(lb)):
            raise LpError("lower bounds must be finite")
        if not np.all(np.isfinite(b)):
            raise LpError("right-hand sides must be finite")
        return LpProblem(sense, c, a.tocsr(), list(row_senses), b, lb, ub)


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray = field(default_factory=lambda: np.empty(0))
    duals: np.ndarray = field(default_factory=lambda: np.empty(0))
    reduced_lower: np.ndarray = field(default_factory=lambda: np.empty(0))
    reduced_upper: np.ndarray = field(default_factory=lambda: np.empty(0))
    objective: float = float("nan")
    pivots: int = 0

    def dual_objective(self, problem: LpProblem) -> float:
        """Bound-aware dual objective; equals the primal objective at optimality."""
        val = (
            float(np.dot(self.duals, problem.b))
            + float(np.dot(self.reduced_lower, problem.lb))
            + float(np.dot(np.where(np.isfinite(problem.ub), problem.ub, 0.0) * self.reduced_upper, np.ones_like(problem.ub)))
        )
        return val


def solve_lp(problem: LpProblem, method: str = "highs") -> LpSolution:
    """Solve a bounded-variable LP, returning primal values and row duals."""
    n = len(problem.c)
    minimize = problem.sense == "min"
    c = problem.c if minimize else -problem.c

    senses = np.array(problem.row_senses)
    eq_mask = senses == "="
    le_mask = senses == "<="
    ge_mask = senses == ">="
    if not np.all(eq_mask | le_mask | ge_mask):
        raise LpError("row senses must be one of <=, >=, =")

    a = problem.a_rows
    a_eq = a[eq_mask] if eq_mask.any() else None
    b_eq = problem.b[eq_mask] if eq_mask.any() else None
    ub_rows = []
    ub_rhs = []
    if le_mask.any():
        ub_rows.append(a[le_mask])
        ub_rhs.append(problem.b[le_mask])
    if ge_mask.any():
        ub_rows.append(-a[ge_mask])
        ub_rhs.append(-problem.b[ge_mask])
    a_ub = sparse.vstack(ub_rows).tocsr() if ub_rows else None
    b_ub = np.concatenate(ub_rhs) if ub_rhs else None

    bounds = np.column_stack([problem.lb, problem.ub])
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds,
        method=method,
    )
    pivots = int(getattr(res, "nit", 0) or 0)
    if res.status == 2:
        return LpSolution(LpStatus.INFEASIBLE, pivots=pivots)
    if res.status == 3:
        return LpSolution(LpStatus.UNBOUNDED, pivots=pivots)
    if res.status != 0:
        raise LpError(f"LP solve failed after {pivots} pivots: {res.message}")

    sign = 1.0 if minimize else -1.0
    duals = np.zeros(len(problem.b))
    if a_ub is not None:
        marg = res.ineqlin.marginals
        k = int(le_mask.sum())
        duals[le_mask] = sign * marg[:k]
        duals[ge_mask] = -sign * marg[k:]
    if a_eq is not None:
        duals[eq_mask] = sign * res.eqlin.marginals
    red_lo = sign * res.lower.marginals if res.lower.marginals is not None else np.zeros(n)
    red_up = sign * res.upper.marginals if res.upper.marginals is not None else np.zeros(n)
    return LpSolution(
        status=LpStatus.OPTIMAL,
        x=np.asarray(res.x, dtype=float),
        duals=duals,
        reduced_lower=np.asarray(red_lo, dtype=float),
        reduced_upper=np.asarray(red_up, dtype=float),
        objective=float(sign * res.fun),
        pivots=pivots,
    )


def assert_optimal(sol: LpSolution, context: str = "LP") -> LpSolution:
    if sol.status is not LpStatus.OPTIMAL:
        raise LpError(f"{context}: expected optimal, got {sol.status.value}")
    return sol


__all__ = [
    "LpProblem",
    "LpSolution",
    "LpStatus",
    "LpError",
    "solve_lp",
    "assert_optimal",
    "TOL",
]
