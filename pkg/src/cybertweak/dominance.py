"""Dominated-website elimination preprocessing.

A website is dominated when a certifying set of hard-to-alter websites
would always absorb the attacker's effort first; removing it does not
change the game value.  The witness search is greedy (sound, not
complete): it scans candidates in increasing compromise cost and stops as
soon as the capacity conditions hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import GameInstance

#: Above this site count the per-site greedy multi-witness scan is skipped
#: and only the vectorized single-witness pass runs (still sound).
GREEDY_SCAN_LIMIT = 5000


@dataclass
class DominanceReport:
    eliminated: frozenset[str] = field(default_factory=frozenset)
    witness: dict[str, tuple[str, ...]] = field(default_factory=dict)
    x_max: dict[str, float] = field(default_factory=dict)


def find_dominated_websites(instance: GameInstance) -> DominanceReport:
    """Single-pass dominance scan; empty when the effort budget is unlimited
    (the capacity condition cannot be certified) or when evasion/blocking
    probabilities alter the plain traffic-share coefficients."""
    if instance.effort_unlimited:
        return DominanceReport()
    arrs = instance.arrays()
    if np.any(arrs["p_evade"] != 0.0) or np.any(arrs["q_block"] != 0.0):
        return DominanceReport()

    n = instance.n
    ct = arrs["ct"]
    kappa = arrs["kappa"]
    t_all = arrs["t_all"]
    pi = arrs["pi"]
    b_d = instance.budget_defender
    b_e = instance.budget_effort

    u_mask = ct >= b_d
    u_idx = np.flatnonzero(u_mask)
    if u_idx.size == 0:
        return DominanceReport()
    with np.errstate(divide="ignore"):
        x_max = np.where(ct > 0, b_d / ct, np.inf)
    # Residual coefficient of a witness even at its best-affordable alteration.
    g = kappa[u_idx] * (1.0 - np.clip(x_max[u_idx], 0.0, 1.0))

    eliminated: dict[int, tuple[int, ...]] = {}

    # Vectorized single-witness pass for uniform compromise cost: a lone u
    # must cover both t_all_w and B_e.  Keeps the scan linearithmic at scale.
    uniform_pi = bool(np.all(pi == pi[0]))
    singles = u_idx[t_all[u_idx] >= b_e]
    if uniform_pi and singles.size:
        gs = g[t_all[u_idx] >= b_e]
        order = np.argsort(-t_all[singles], kind="stable")
        su = singles[order]
        sg = gs[order]
        # Top-2 running argmax of g over capacity-sorted prefixes, so a site
        # never certifies itself.
        best1 = np.empty(su.size, dtype=int)
        best2 = np.empty(su.size, dtype=int)
        b1 = b2 = -1
        for j in range(su.size):
            if b1 < 0 or sg[j] > sg[b1]:
                b2, b1 = b1, j
            elif b2 < 0 or sg[j] > sg[b2]:
                b2 = j
            best1[j] = b1
            best2[j] = b2
        neg_caps = -t_all[su]
        cap_need = np.maximum(t_all, b_e)
        hi_all = np.searchsorted(neg_caps, -cap_need, side="right")
        for w in range(n):
            hi = int(hi_all[w])
            if hi == 0:
                continue
            j = best1[hi - 1]
            if su[j] == w:
                j = best2[hi - 1]
                if j < 0:
                    continue
            if sg[j] >= kappa[w]:
                eliminated[w] = (int(su[j]),)

    # Greedy multi-witness pass (desk scale): accumulate cheap witnesses
    # until the capacity conditions hold, then test the cost condition.
    if n <= GREEDY_SCAN_LIMIT:
        for w in range(n):
            if w in eliminated:
                continue
            cand = u_idx[(g >= kappa[w]) & (u_idx != w)]
            if cand.size == 0:
                continue
            cand = cand[np.argsort(pi[cand], kind="stable")]
            total_cap = 0.0
            total_pi = 0.0
            picked: list[int] = []
            for u in cand:
                picked.append(int(u))
                total_cap += t_all[u]
                total_pi += pi[u]
                if total_cap >= t_all[w] and total_cap >= b_e:
                    break
            if (
                picked
                and total_cap >= t_all[w]
                and total_cap >= b_e
                and total_pi <= pi[w]
            ):
                eliminated[w] = tuple(picked)

    ids = [instance.websites[i].id for i in eliminated]
    return DominanceReport(
        eliminated=frozenset(ids),
        witness={
            instance.websites[w].id: tuple(instance.websites[u].id for u in us)
            for w, us in eliminated.items()
        },
        x_max={
            instance.websites[u].id: float(min(x_max[u], 1.0))
            for u in u_idx
        },
    )


def reduce_instance(instance: GameInstance, report: DominanceReport):
    """Instance without the eliminated sites plus the index map back."""
    if not report.eliminated:
        return instance, np.arange(instance.n)
    keep = [i for i, w in enumerate(instance.websites) if w.id not in report.eliminated]
    reduced = GameInstance(
        websites=tuple(instance.websites[i] for i in keep),
        budget_defender=instance.budget_defender,
        budget_attacker=instance.budget_attacker,
        budget_effort=instance.budget_effort,
    )
    return reduced, np.array(keep, dtype=int)
