"""Serial greedy baseline and threshold reconstruction.

Greedy scans every edge once in the canonical order (weight descending,
ids breaking ties) and keeps an edge whenever both endpoints still have
spare capacity.  It is the reference solution all other solvers in this
package must reproduce exactly.
"""

from __future__ import annotations

from .graph import (
    BELOW_ALL,
    BipartiteInstance,
    EdgeKey,
    Matching,
    canonical_key,
    canonical_sorted_adjacency,
    global_sorted_edges,
)

ThresholdVector = list[EdgeKey]


def solve_serial_greedy(instance: BipartiteInstance) -> tuple[Matching, ThresholdVector]:
    """Greedy matching plus the per-ad pour thresholds it implies.

    The thresholds are reconstructed with :func:`thresholds_from_matching`
    and coincide with the pointer positions a round-based pour of the
    same instance ends at, so greedy can label warm starts just as well
    as the round-based solver.
    """
    ad_left = instance.ad_capacity.copy()
    cons_left = instance.consumer_capacity.copy()
    picked: list[tuple[int, int]] = []
    for edge in global_sorted_edges(instance):
        if ad_left[edge.ad] > 0 and cons_left[edge.consumer] > 0:
            ad_left[edge.ad] -= 1
            cons_left[edge.consumer] -= 1
            picked.append((edge.ad, edge.consumer))
    matching = Matching.from_pairs(instance, picked)
    return matching, thresholds_from_matching(instance, matching.matched)


def thresholds_from_matching(
    instance: BipartiteInstance, matched: set[tuple[int, int]] | frozenset[tuple[int, int]]
) -> ThresholdVector:
    """Per-ad threshold implied by a converged matching.

    A round-based pour stops an ad's pointer right after its canonically
    lightest matched edge once the ad holds `b(a)` matches; an ad holding
    fewer poured everything it had.  The threshold is therefore the first
    neighbor after the lightest matched edge, or BELOW_ALL when the ad
    ran off the end of its list.
    """
    sorted_adj = canonical_sorted_adjacency(instance)
    by_ad: list[list[EdgeKey]] = [[] for _ in range(instance.num_ads)]
    for a, c in matched:
        by_ad[a].append(EdgeKey(instance.weight_of(a, c), a, c))
    thresholds: ThresholdVector = []
    for ad in range(instance.num_ads):
        mine = by_ad[ad]
        if len(mine) < instance.ad_capacity[ad]:
            thresholds.append(BELOW_ALL)
            continue
        lightest = max(mine, key=canonical_key)
        neighbors = sorted_adj[ad]
        pos = neighbors.index(lightest) + 1
        thresholds.append(neighbors[pos] if pos < len(neighbors) else BELOW_ALL)
    return thresholds
