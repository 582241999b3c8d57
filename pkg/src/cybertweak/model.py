"""Domain types, validation, objective evaluation, instance I/O and generation.

All quantities are real-valued. An unlimited scanning budget is encoded as
``math.inf`` and serialized as the string ``"unlimited"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

#: Global numeric tolerance for feasibility and value comparisons.
TOL = 1e-7

UNLIMITED = math.inf


class ParseError(ValueError):
    """Raised when an instance file cannot be decoded into a GameInstance."""


@dataclass(frozen=True)
class Website:
    """A single website with its traffic and cost parameters.

    ``t`` is the organization's weekly traffic to the site, ``t_all`` the
    total weekly traffic from all visitors, ``c`` the per-unit alteration
    cost, ``pi`` the attacker's compromise cost.  ``p_evade`` is the
    probability the attacker sees true information despite alteration;
    ``q_block`` the probability the attack fails despite an unaltered packet.
    """

    id: str
    t: float
    t_all: float
    c: float
    pi: float
    name: str | None = None
    p_evade: float = 0.0
    q_block: float = 0.0

    @property
    def kappa(self) -> float:
        """Organization's share of the site's traffic, t / t_all."""
        return self.t / self.t_all


@dataclass(frozen=True)
class GameInstance:
    """Full game input: websites plus defender/attacker/effort budgets."""

    websites: tuple[Website, ...]
    budget_defender: float
    budget_attacker: float
    budget_effort: float  # math.inf encodes an unlimited scanning budget

    def __post_init__(self):
        object.__setattr__(self, "websites", tuple(self.websites))

    @property
    def n(self) -> int:
        return len(self.websites)

    @property
    def effort_unlimited(self) -> bool:
        return math.isinf(self.budget_effort)

    def index_of(self, website_id: str) -> int:
        for i, w in enumerate(self.websites):
            if w.id == website_id:
                return i
        raise KeyError(website_id)

    # Cached numpy views; computed lazily, instance stays logically immutable.
    def arrays(self) -> dict[str, np.ndarray]:
        cached = self.__dict__.get("_arrays")
        if cached is None:
            ws = self.websites
            cached = {
                "t": np.array([w.t for w in ws], dtype=float),
                "t_all": np.array([w.t_all for w in ws], dtype=float),
                "c": np.array([w.c for w in ws], dtype=float),
                "pi": np.array([w.pi for w in ws], dtype=float),
                "p_evade": np.array([w.p_evade for w in ws], dtype=float),
                "q_block": np.array([w.q_block for w in ws], dtype=float),
            }
            cached["kappa"] = cached["t"] / cached["t_all"]
            # Objective per site is base_w - slope_w * x_w per unit effort.
            cached["base"] = cached["kappa"] * (1.0 - cached["q_block"])
            cached["slope"] = cached["base"] * (1.0 - cached["p_evade"])
            cached["ct"] = cached["c"] * cached["t"]
            object.__setattr__(self, "_arrays", cached)
        return cached

    @property
    def max_defender_budget(self) -> float:
        """Budget that affords full alteration everywhere."""
        return float(self.arrays()["ct"].sum())

    def attackable_mask(self) -> np.ndarray:
        """Sites the attacker can afford to compromise (pi <= B_a)."""
        return self.arrays()["pi"] <= self.budget_attacker + TOL

    def with_budget_defender(self, budget: float) -> "GameInstance":
        return replace(self, budget_defender=budget)


@dataclass(frozen=True)
class DefenderStrategy:
    """Per-website alteration probabilities, each in [0, 1]."""

    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))

    @staticmethod
    def zeros(n: int) -> "DefenderStrategy":
        return DefenderStrategy(np.zeros(n))

    def cost(self, instance: GameInstance) -> float:
        return float(np.dot(instance.arrays()["ct"], self.x))

    def is_feasible(self, instance: GameInstance, tol: float = TOL) -> bool:
        scale = 1.0 + abs(instance.budget_defender)
        return (
            self.x.shape == (instance.n,)
            and bool(np.all(self.x >= -tol))
            and bool(np.all(self.x <= 1.0 + tol))
            and self.cost(instance) <= instance.budget_defender + tol * scale
        )


@dataclass(frozen=True)
class AttackPlan:
    """Attacker's decision: compromise indicator y and effort vector e."""

    y: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        object.__setattr__(self, "e", np.asarray(self.e, dtype=float))

    @staticmethod
    def empty(n: int) -> "AttackPlan":
        return AttackPlan(np.zeros(n), np.zeros(n))

    def partial_sites(self, instance: GameInstance, tol: float = TOL) -> list[int]:
        """Indices with effort strictly between 0 and full traffic."""
        t_all = instance.arrays()["t_all"]
        scale = 1.0 + t_all
        return [
            i
            for i in range(instance.n)
            if self.e[i] > tol * scale[i] and self.e[i] < t_all[i] - tol * scale[i]
        ]

    def feasibility_violations(self, instance: GameInstance, tol: float = TOL) -> list[str]:
        arrs = instance.arrays()
        out = []
        if np.any(self.e < -tol):
            out.append("negative effort")
        if np.any(self.e > arrs["t_all"] * np.round(self.y) + tol * (1.0 + arrs["t_all"])):
            out.append("effort on uncompromised or beyond total traffic (e_w <= t_all_w * y_w)")
        if not instance.effort_unlimited:
            if self.e.sum() > instance.budget_effort + tol * (1.0 + instance.budget_effort):
                out.append("effort budget exceeded (sum e_w <= B_e)")
        spent = float(np.dot(arrs["pi"], np.round(self.y)))
        if spent > instance.budget_attacker + tol * (1.0 + instance.budget_attacker):
            out.append("attack budget exceeded (sum pi_w y_w <= B_a)")
        return out


@dataclass(frozen=True)
class Violation:
    """A single validation finding; warnings do not make an instance unusable."""

    website_id: str | None
    rule: str
    severity: str = "error"  # "error" | "warning"


@dataclass
class SolveResult:
    """Outcome of any solver: strategy, value, bounds and trace metadata."""

    strategy: DefenderStrategy
    value: float
    best_response: AttackPlan
    lower_bound: float
    upper_bound: float
    method: str
    iterations: int = 0
    wall_time: float = 0.0
    eliminated: frozenset[str] = field(default_factory=frozenset)
    status: str = "optimal"  # "optimal" | "proven_optimal" | "heuristic" | "iteration_limit"
    columns: int = 0

    def to_dict(self, instance: GameInstance) -> dict:
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "method": self.method,
            "status": self.status,
            "iterations": self.iterations,
            "columns": self.columns,
            "wall_time": self.wall_time,
            "eliminated": sorted(self.eliminated),
            "strategy": {w.id: float(xi) for w, xi in zip(instance.websites, self.strategy.x)},
            "best_response": {
                "y": {w.id: float(yi) for w, yi in zip(instance.websites, self.best_response.y)},
                "e": {w.id: float(ei) for w, ei in zip(instance.websites, self.best_response.e)},
            },
        }


def validate(instance: GameInstance) -> list[Violation]:
    """Check all type invariants; returns findings, empty when clean.

    Sites with pi > B_a are reported as warnings ("unattackable website");
    they stay in the instance but are excluded from attacker decisions.
    """
    out: list[Violation] = []
    seen: set[str] = set()
    for w in instance.websites:
        if w.id in seen:
            out.append(Violation(w.id, "duplicate website id"))
        seen.add(w.id)
        if w.t_all <= 0:
            out.append(Violation(w.id, "t_all must be positive"))
        if w.t < 0:
            out.append(Violation(w.id, "t must be nonnegative"))
        if w.t_all > 0 and w.t > w.t_all:
            out.append(Violation(w.id, "t > t_all"))
        if w.c <= 0:
            out.append(Violation(w.id, "c must be positive"))
        if w.pi <= 0:
            out.append(Violation(w.id, "pi must be positive"))
        if not 0.0 <= w.p_evade <= 1.0:
            out.append(Violation(w.id, "p_evade must be in [0, 1]"))
        if not 0.0 <= w.q_block <= 1.0:
            out.append(Violation(w.id, "q_block must be in [0, 1]"))
        if w.pi > instance.budget_attacker:
            out.append(Violation(w.id, "unattackable website", severity="warning"))
    if instance.budget_defender < 0:
        out.append(Violation(None, "budget_defender must be nonnegative"))
    if instance.budget_attacker < 0:
        out.append(Violation(None, "budget_attacker must be nonnegative"))
    if instance.budget_effort < 0:
        out.append(Violation(None, "budget_effort must be nonnegative"))
    return out


def errors_only(violations: list[Violation]) -> list[Violation]:
    return [v for v in violations if v.severity == "error"]


def evaluate_objective(
    instance: GameInstance, strategy: DefenderStrategy, plan: AttackPlan
) -> float:
    """Expected scanned unaltered traffic per week under (x, y, e).

    Computes sum_w kappa_w (1 - x_w (1 - p_w)) (1 - q_w) e_w, which reduces
    to sum_w kappa_w (1 - x_w) e_w when p_w = q_w = 0 everywhere.
    """
    bad = plan.feasibility_violations(instance)
    if bad:
        raise ValueError(f"infeasible attack plan: {bad[0]}")
    arrs = instance.arrays()
    coeff = arrs["base"] - arrs["slope"] * strategy.x
    return float(np.dot(coeff, plan.e))


def response_value(instance: GameInstance, strategy: DefenderStrategy, e: np.ndarray) -> float:
    """Objective value of an effort vector, without feasibility checks."""
    arrs = instance.arrays()
    coeff = arrs["base"] - arrs["slope"] * strategy.x
    return float(np.dot(coeff, np.asarray(e, dtype=float)))


# ---------------------------------------------------------------------------
# Random instance generation


def generate_instance(size: int, profile: str = "standard", seed: int = 0) -> GameInstance:
    """Sample a random instance.

    ``standard`` draws each field uniformly from the benchmark marginals
    (t_all ~ U(350,750), t ~ U(50,100), c ~ U(1,4), pi ~ U(30,54), with
    budgets drawn as fractions of their instance-wide maxima).  ``small``
    keeps the same structure at one-tenth traffic scale with small integer
    compromise costs, suitable for exhaustive oracles and exact DP.
    ``large_split`` partitions the sites 1:9 into a high-engagement and a
    low-engagement group with uniform compromise cost 3.  ``unit`` is the
    ``small`` profile with traffic expressed in hundred-packet units, so
    a whole site's traffic is O(1); heuristics whose weights mix traffic
    and money terms (e.g. the greedy alpha rules) are scale-sensitive and
    only meaningfully compared at this scale.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = np.random.default_rng(seed)
    if profile in ("standard", "small", "unit"):
        if profile == "standard":
            t_all = rng.uniform(350, 750, size)
            t = rng.uniform(50, 100, size)
            pi = rng.uniform(30, 54, size)
        else:
            t_all = rng.uniform(35, 75, size)
            t = rng.uniform(5, 10, size)
            pi = rng.integers(3, 10, size).astype(float)
        c = rng.uniform(1, 4, size)
        ct_sum = float(np.dot(c, t))
        b_d = rng.uniform(0.11 * ct_sum, 0.71 * ct_sum)
        b_a = rng.uniform(0.1 * pi.sum(), 0.8 * pi.sum())
        b_e = rng.uniform(0.2 * t_all.sum(), 0.8 * t_all.sum())
        if profile == "unit":
            t_all, t, b_d, b_e = t_all / 100.0, t / 100.0, b_d / 100.0, b_e / 100.0
    elif profile == "large_split":
        n1 = max(1, size // 10)
        n2 = size - n1
        t_all = np.concatenate([rng.uniform(60, 110, n1), rng.uniform(20, 70, n2)])
        t = np.concatenate([rng.uniform(45, 55, n1), rng.uniform(3, 8, n2)])
        c = np.concatenate([rng.uniform(2, 6, n1), rng.uniform(1, 3, n2)])
        pi = np.full(size, 3.0)
        ct_sum = float(np.dot(c, t))
        b_d = rng.uniform(0, 10 * ct_sum / size)
        b_a = rng.uniform(0.1 * pi.sum(), 0.8 * pi.sum())
        b_e = rng.uniform(0, 3 * t_all.sum() / size)
    else:
        raise ValueError(f"unknown profile: {profile!r}")

    websites = tuple(
        Website(id=f"w{i}", t=float(t[i]), t_all=float(t_all[i]), c=float(c[i]), pi=float(pi[i]))
        for i in range(size)
    )
    return GameInstance(
        websites=websites,
        budget_defender=float(b_d),
        budget_attacker=float(b_a),
        budget_effort=float(b_e),
    )


def generate_small_effort_instance(size: int, seed: int = 0) -> GameInstance:
    """Standard-profile instance with B_e ~ U(1, min_w t_all_w)."""
    inst = generate_instance(size, "standard", seed)
    rng = np.random.default_rng((seed, 0x5E))
    b_e = rng.uniform(1.0, min(w.t_all for w in inst.websites))
    return replace(inst, budget_effort=float(b_e))


# ---------------------------------------------------------------------------
# Instance file I/O (UTF-8 JSON)


def instance_to_dict(instance: GameInstance) -> dict:
    sites = []
    for w in instance.websites:
        d = {"id": w.id, "t": w.t, "t_all": w.t_all, "c": w.c, "pi": w.pi}
        if w.name is not None:
            d["name"] = w.name
        if w.p_evade != 0.0:
            d["p_evade"] = w.p_evade
        if w.q_block != 0.0:
            d["q_block"] = w.q_block
        sites.append(d)
    return {
        "websites": sites,
        "budget_defender": instance.budget_defender,
        "budget_attacker": instance.budget_attacker,
        "budget_effort": "unlimited" if instance.effort_unlimited else instance.budget_effort,
    }


def instance_from_dict(data: dict) -> GameInstance:
    if not isinstance(data, dict):
        raise ParseError("instance file must contain a JSON object")
    try:
        raw_sites = data["websites"]
    except KeyError:
        raise ParseError("missing field: websites") from None
    websites = []
    for i, s in enumerate(raw_sites):
        for fld in ("id", "t", "t_all", "c", "pi"):
            if fld not in s:
                raise ParseError(f"website #{i}: missing field: {fld}")
        websites.append(
            Website(
                id=str(s["id"]),
                name=s.get("name"),
                t=float(s["t"]),
                t_all=float(s["t_all"]),
                c=float(s["c"]),
                pi=float(s["pi"]),
                p_evade=float(s.get("p_evade", 0.0)),
                q_block=float(s.get("q_block", 0.0)),
            )
        )
    for fld in ("budget_defender", "budget_attacker", "budget_effort"):
        if fld not in data:
            raise ParseError(f"missing field: {fld}")
    b_e = data["budget_effort"]
    if b_e == "unlimited":
        b_e = UNLIMITED
    return GameInstance(
        websites=tuple(websites),
        budget_defender=float(data["budget_defender"]),
        budget_attacker=float(data["budget_attacker"]),
        budget_effort=float(b_e),
    )


def save_instance(instance: GameInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(instance_to_dict(instance), f, indent=1)
        f.write("\n")


def load_instance(path) -> GameInstance:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return instance_from_dict(data)
