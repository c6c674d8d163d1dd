"""Round-based parallel greedy ("pouring") solver.

Every ad sorts its neighbors once, then the solver runs synchronous
rounds: each ad still short of its capacity pours its next-heaviest
unpoured edges as offers, consumers keep their best `b(c)` live offers,
and a barrier separates rounds.  Offers squeezed out of a matched view
never return here (they only would under withdrawals, which this solver
never performs), so the process converges to exactly the serial greedy
matching regardless of how ads are scheduled onto workers.

`worker_count` controls the deterministic schedule ads are processed in
within a round.  The result is schedule-independent by construction:
barrier states depend only on which offers exist, not on arrival order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SolverNotTerminatedError
from .graph import (
    BELOW_ALL,
    BipartiteInstance,
    EdgeKey,
    Matching,
    canonical_sorted_adjacency,
)
from .greedy import ThresholdVector
from .offers import OfferLedger


def worker_schedule(num_ads: int, worker_count: int) -> list[int]:
    """Processing order of ads for a round: worker w owns ads w, w+N, ...

    Workers take turns in index order, so different worker counts yield
    genuinely different schedules; solver output must not depend on it.
    """
    if worker_count < 1:
        raise ValueError("worker_count must be >= 1")
    order: list[int] = []
    for w in range(worker_count):
        order.extend(range(w, num_ads, worker_count))
    return order


@dataclass
class BSuitorState:
    """Mutable solver state; inspect after `solve_bsuitor` for thresholds."""

    instance: BipartiteInstance
    sorted_adj: list[list[EdgeKey]]
    pointer: np.ndarray
    ledger: OfferLedger
    iterations: int = 0
    terminated: bool = False
    schedule: list[int] = field(default_factory=list)


def solve_bsuitor(
    instance: BipartiteInstance, worker_count: int = 1
) -> tuple[Matching, ThresholdVector, int]:
    """Run the pour loop to convergence.

    Returns the matching (identical to serial greedy's), the per-ad
    thresholds at the final pointers, and the number of pour rounds.
    """
    state = BSuitorState(
        instance=instance,
        sorted_adj=canonical_sorted_adjacency(instance),
        pointer=np.zeros(instance.num_ads, dtype=np.int64),
        ledger=OfferLedger(instance),
        schedule=worker_schedule(instance.num_ads, worker_count),
    )
    ledger = state.ledger
    cap = instance.ad_capacity

    while True:
        # Snapshot at the barrier: which ads pour, and how much.
        quotas: list[tuple[int, int]] = []
        for ad in state.schedule:
            deficit = int(cap[ad]) - ledger.reserved_count(ad)
            unpoured = len(state.sorted_adj[ad]) - int(state.pointer[ad])
            quota = min(deficit, unpoured)
            if quota > 0:
                quotas.append((ad, quota))
        if not quotas:
            break
        state.iterations += 1
        for ad, quota in quotas:
            start = int(state.pointer[ad])
            for edge in state.sorted_adj[ad][start : start + quota]:
                ledger.offer(edge)
            state.pointer[ad] = start + quota

    state.terminated = True
    matching = Matching.from_pairs(instance, ledger.matched_pairs())
    return matching, extract_thresholds(state), state.iterations


def extract_thresholds(state: BSuitorState) -> ThresholdVector:
    """Edge at each ad's final pointer; BELOW_ALL for exhausted ads.

    Raises SolverNotTerminatedError if the pour loop is still running.
    """
    if not state.terminated:
        raise SolverNotTerminatedError("thresholds are defined only at termination")
    thresholds: ThresholdVector = []
    for ad in range(state.instance.num_ads):
        pos = int(state.pointer[ad])
        neighbors = state.sorted_adj[ad]
        thresholds.append(neighbors[pos] if pos < len(neighbors) else BELOW_ALL)
    return thresholds
