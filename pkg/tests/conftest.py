"""Shared fixtures and brute-force oracles used across the suite."""

import itertools

import numpy as np
import pytest

from cybertweak.best_response import AttackView, canonical_fill
from cybertweak.model import UNLIMITED, GameInstance, Website


def make_instance(sites, b_d=0.0, b_a=0.0, b_e=0.0):
    """Build an instance from (t, t_all, c, pi) tuples with ids w1, w2, ..."""
    websites = tuple(
        Website(id=f"w{i + 1}", t=t, t_all=t_all, c=c, pi=pi)
        for i, (t, t_all, c, pi) in enumerate(sites)
    )
    return GameInstance(
        websites=websites,
        budget_defender=b_d,
        budget_attacker=b_a,
        budget_effort=b_e,
    )


@pytest.fixture
def example_instance():
    """Three sites where the attacker's best move is to fully scan w1 and w2."""
    return make_instance(
        [(10, 20, 1, 1), (5, 5, 1, 1), (8, 40, 1, 2)],
        b_d=0.0,
        b_a=2,
        b_e=25,
    )


@pytest.fixture
def knapsack_instance():
    """t = t_all makes every site worth its full traffic; binary knapsack."""
    return make_instance(
        [(10, 10, 1, 5), (7, 7, 1, 4), (4, 4, 1, 3)],
        b_d=0.0,
        b_a=7,
        b_e=UNLIMITED,
    )


def brute_force_response_plan(instance, x):
    """Exhaustive best response: every compromise subset, greedy effort fill."""
    view = AttackView.of(instance)
    k = view.coeffs(x.x)
    best = 0.0
    best_fill = (np.array([], dtype=int), np.array([]))
    m = view.pi.size
    for r in range(m + 1):
        for subset in itertools.combinations(range(m), r):
            if view.pi[list(subset)].sum() > view.b_a + 1e-9:
                continue
            order, efforts, val = canonical_fill(
                view, k, np.array(subset, dtype=int), view.b_e
            )
            if val > best:
                best = val
                best_fill = (order, efforts)
    return view.to_plan(*best_fill)


def brute_force_response_value(instance, x):
    from cybertweak.model import evaluate_objective

    return evaluate_objective(instance, x, brute_force_response_plan(instance, x))


def scaled_instance(size, seed):
    """Random instance with Table-3-like shape scaled down for brute force.

    Integer compromise costs keep the pseudo-polynomial solver lossless at
    scale 1, and a small attacker budget keeps subset enumeration cheap.
    """
    rng = np.random.default_rng(seed)
    t_all = rng.uniform(35, 75, size)
    t = rng.uniform(5, 10, size)
    c = rng.uniform(1, 4, size)
    pi = rng.integers(3, 10, size).astype(float)
    websites = tuple(
        Website(id=f"w{i}", t=float(t[i]), t_all=float(t_all[i]), c=float(c[i]), pi=float(pi[i]))
        for i in range(size)
    )
    ct = c * t
    return GameInstance(
        websites=websites,
        budget_defender=float(rng.uniform(0.11, 0.71) * ct.sum()),
        budget_attacker=float(rng.uniform(0.1, 0.8) * pi.sum()),
        budget_effort=float(rng.uniform(0.2, 0.8) * t_all.sum()),
    )
