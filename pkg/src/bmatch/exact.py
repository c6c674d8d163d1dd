"""Exact optimum for small instances via branch and bound.

Only meant for test-scale ground truth: it explores edge
include/exclude decisions in canonical order, seeded with the greedy
matching as incumbent and pruned by a per-side capacity-capped bound.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .errors import BudgetExceededError
from .graph import BipartiteInstance, Matching, global_sorted_edges
from .greedy import solve_serial_greedy


@dataclass(frozen=True)
class SearchLimits:
    """Size guardrails for the exact solver.

    Instances above `max_edges` are rejected outright unless a
    `node_budget` is given, in which case the search runs until the
    budget is exhausted and then fails loudly instead of silently
    returning a non-optimum.
    """

    max_edges: int = 40
    node_budget: int | None = None


@dataclass(frozen=True)
class ExactResult:
    optimal_value: float
    optimal_matching: Matching
    node_count: int


def _suffix_bound(edges, start, ad_res, cons_res) -> float:
    """Admissible bound: capped prefix sums per side, tighter one wins."""
    take_a: dict[int, int] = {}
    take_c: dict[int, int] = {}
    sum_a = 0.0
    sum_c = 0.0
    for e in edges[start:]:
        ta = take_a.get(e.ad, 0)
        if ta < ad_res[e.ad]:
            take_a[e.ad] = ta + 1
            sum_a += e.weight
        tc = take_c.get(e.consumer, 0)
        if tc < cons_res[e.consumer]:
            take_c[e.consumer] = tc + 1
            sum_c += e.weight
    return min(sum_a, sum_c)


def solve_exact(instance: BipartiteInstance, limits: SearchLimits | None = None) -> ExactResult:
    """Branch and bound over edge inclusion in canonical order.

    Raises BudgetExceededError when the instance exceeds the configured
    limits; callers must treat that as "unknown", never as an optimum.
    """
    limits = limits or SearchLimits()
    m = instance.num_edges
    if limits.node_budget is None and m > limits.max_edges:
        raise BudgetExceededError(
            f"{m} edges exceeds the {limits.max_edges}-edge cap; set a node_budget to force"
        )

    edges = global_sorted_edges(instance)
    incumbent, _ = solve_serial_greedy(instance)
    best_pairs = set(incumbent.matched)
    best_value = incumbent.total_weight

    ad_res = instance.ad_capacity.astype(int).tolist()
    cons_res = instance.consumer_capacity.astype(int).tolist()
    chosen: list[tuple[int, int]] = []
    nodes = 0
    budget = limits.node_budget

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 2 * m + 200))

    def dfs(i: int, value: float) -> None:
        nonlocal nodes, best_value, best_pairs
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceededError(f"node budget {budget} exhausted")
        if value > best_value:
            best_value = value
            best_pairs = set(chosen)
        if i == m:
            return
        if value + _suffix_bound(edges, i, ad_res, cons_res) <= best_value:
            return
        e = edges[i]
        if ad_res[e.ad] > 0 and cons_res[e.consumer] > 0:
            ad_res[e.ad] -= 1
            cons_res[e.consumer] -= 1
            chosen.append((e.ad, e.consumer))
            dfs(i + 1, value + e.weight)
            chosen.pop()
            ad_res[e.ad] += 1
            cons_res[e.consumer] += 1
        dfs(i + 1, value)

    try:
        dfs(0, 0.0)
    finally:
        sys.setrecursionlimit(old_limit)

    matching = Matching.from_pairs(instance, best_pairs)
    return ExactResult(
        optimal_value=matching.total_weight, optimal_matching=matching, node_count=nodes
    )
