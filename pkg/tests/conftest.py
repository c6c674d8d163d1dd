"""Shared fixtures and independent test oracles.

The brute-force matcher here exists only as ground truth: it enumerates
edge subsets directly over raw triples and knows nothing about the
package's solvers, so it can referee them.
"""

from __future__ import annotations

import random

import pytest

from bmatch import BipartiteInstance, build_instance


def brute_force_optimum(
    num_ads: int,
    num_consumers: int,
    edges: list[tuple[int, int, float]],
    ad_cap: list[int],
    cons_cap: list[int],
) -> tuple[float, frozenset[tuple[int, int]]]:
    """Exhaustive search over all feasible edge subsets."""
    best_value = 0.0
    best_set: frozenset[tuple[int, int]] = frozenset()
    a_used = [0] * num_ads
    c_used = [0] * num_consumers
    chosen: list[tuple[int, int]] = []

    def recurse(i: int, value: float) -> None:
        nonlocal best_value, best_set
        if value > best_value:
            best_value = value
            best_set = frozenset(chosen)
        if i == len(edges):
            return
        a, c, w = edges[i]
        if a_used[a] < ad_cap[a] and c_used[c] < cons_cap[c]:
            a_used[a] += 1
            c_used[c] += 1
            chosen.append((a, c))
            recurse(i + 1, value + w)
            chosen.pop()
            a_used[a] -= 1
            c_used[c] -= 1
        recurse(i + 1, value)

    recurse(0, 0.0)
    return best_value, best_set


WALKTHROUGH_EDGES = [
    (0, 0, 8.0), (0, 1, 6.0), (0, 2, 4.0), (0, 3, 2.0),
    (1, 0, 3.0), (1, 1, 7.0), (1, 2, 1.0), (1, 3, 9.0),
]


@pytest.fixture
def walkthrough() -> BipartiteInstance:
    """Two ads (capacity 2), four consumers (capacity 1), 8 edges."""
    return build_instance(2, 4, WALKTHROUGH_EDGES, [2, 2], [1, 1, 1, 1])


def random_instance(
    rng: random.Random,
    max_ads: int = 12,
    max_consumers: int = 12,
    max_edges: int = 30,
    integer_weights: bool | None = None,
) -> BipartiteInstance:
    """Small random instance; integer weights force ties."""
    num_ads = rng.randint(1, max_ads)
    num_consumers = rng.randint(1, max_consumers)
    pairs = set()
    for _ in range(rng.randint(0, min(num_ads * num_consumers, max_edges))):
        pairs.add((rng.randrange(num_ads), rng.randrange(num_consumers)))
    if integer_weights is None:
        integer_weights = rng.random() < 0.5
    if integer_weights:
        edges = [(a, c, float(rng.randint(1, 6))) for a, c in sorted(pairs)]
    else:
        edges = [(a, c, rng.uniform(0.05, 10.0)) for a, c in sorted(pairs)]
    ad_cap = [rng.randint(1, 3) for _ in range(num_ads)]
    cons_cap = [rng.randint(1, 3) for _ in range(num_consumers)]
    return build_instance(num_ads, num_consumers, edges, ad_cap, cons_cap)


def raw_triples(instance: BipartiteInstance) -> list[tuple[int, int, float]]:
    triples = []
    for ad in range(instance.num_ads):
        cons, ws = instance.neighbors(ad)
        triples.extend((ad, int(c), float(w)) for c, w in zip(cons, ws))
    return triples
