import math
import random

import pytest

from bmatch import SearchLimits, build_instance, solve_exact, solve_serial_greedy, verify_feasible
from bmatch.errors import BudgetExceededError

from conftest import WALKTHROUGH_EDGES, brute_force_optimum, random_instance, raw_triples


def test_exact_walkthrough_optimum(walkthrough):
    result = solve_exact(walkthrough)
    assert result.optimal_value == 28.0
    ok, _ = verify_feasible(walkthrough, result.optimal_matching)
    assert ok
    assert result.node_count > 0
    best, _ = brute_force_optimum(2, 4, WALKTHROUGH_EDGES, [2, 2], [1, 1, 1, 1])
    assert result.optimal_value == best


def test_exact_single_edge():
    inst = build_instance(1, 1, [(0, 0, 3.25)], [1], [1])
    result = solve_exact(inst)
    assert result.optimal_value == 3.25
    assert result.optimal_matching.matched == {(0, 0)}


def test_exact_matches_enumeration_on_small_instances():
    rng = random.Random(99)
    for _ in range(120):
        inst = random_instance(rng, max_ads=5, max_consumers=5, max_edges=16)
        result = solve_exact(inst)
        best, _ = brute_force_optimum(
            inst.num_ads,
            inst.num_consumers,
            raw_triples(inst),
            inst.ad_capacity.tolist(),
            inst.consumer_capacity.tolist(),
        )
        assert math.isclose(result.optimal_value, best, rel_tol=1e-12, abs_tol=1e-12)
        recomputed = math.fsum(
            inst.weight_of(a, c) for a, c in result.optimal_matching.matched
        )
        assert math.isclose(result.optimal_value, recomputed, rel_tol=1e-12)


def test_greedy_never_exceeds_optimum_and_half_bound():
    rng = random.Random(123)
    ratios = []
    for _ in range(120)[:]:
        inst = random_instance(rng, max_ads=10, max_consumers=10, max_edges=30)
        if inst.num_edges == 0:
            continue
        greedy, _ = solve_serial_greedy(inst)
        result = solve_exact(inst)
        assert greedy.total_weight <= result.optimal_value + 1e-9
        ratio = greedy.total_weight / result.optimal_value if result.optimal_value else 1.0
        assert ratio >= 0.5 - 1e-12
        ratios.append(ratio)
    assert sum(ratios) / len(ratios) >= 0.9


def test_exact_rejects_oversized_instance():
    edges = [(a, c, 1.0 + a + c) for a in range(7) for c in range(6)]  # 42 edges
    inst = build_instance(7, 6, edges, [2] * 7, [2] * 6)
    with pytest.raises(BudgetExceededError):
        solve_exact(inst)


def test_exact_node_budget_exhaustion():
    edges = [(a, c, 1.0 + ((a * 7 + c) % 5)) for a in range(6) for c in range(6)]
    inst = build_instance(6, 6, edges, [2] * 6, [2] * 6)
    with pytest.raises(BudgetExceededError):
        solve_exact(inst, SearchLimits(max_edges=10, node_budget=5))


def test_exact_node_budget_allows_larger_instances():
    edges = [(a, c, float(1 + (a + 2 * c) % 4)) for a in range(5) for c in range(9)]
    inst = build_instance(5, 9, edges, [3] * 5, [2] * 9)  # 45 edges > default cap
    result = solve_exact(inst, SearchLimits(node_budget=10**7))
    greedy, _ = solve_serial_greedy(inst)
    assert result.optimal_value >= greedy.total_weight
