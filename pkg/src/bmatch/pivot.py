"""Pivot-partitioned warm-start solver.

Instead of sorting each ad's neighbors, a per-ad *pivot* (an estimate of
the weight threshold a converged pour run ends at) splits them in one
linear pass: everything canonically before the pivot is offered
immediately, the rest is kept back unsorted.  Fine-tuning rounds then
repair the estimate: over-subscribed ads recall their worst held offers,
under-subscribed ads pour their best withheld edges, until the matching
is exactly the serial greedy one.  A perfect pivot needs zero
fine-tuning rounds; an arbitrarily bad one degenerates into the plain
round-based pour, so solution quality never depends on the predictor.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import PredictorFailureError
from .graph import BipartiteInstance, EdgeKey, Matching, canonical_key
from .greedy import ThresholdVector, thresholds_from_matching
from .bsuitor import worker_schedule
from .offers import OfferLedger
from .report import RunReport

Pivot = EdgeKey | float


@dataclass
class PartitionedNeighbors:
    """One ad's neighbors split by its pivot.

    `poured` went out as offers during the initial round.  `remaining`
    stays unsorted until the ad first needs ordered access, at which
    point it is drained into a heap.  `recalled` holds edges this ad
    withdrew; they all precede everything in `remaining`, so best-first
    pouring drains `recalled` first.
    """

    ad: int
    poured: list[EdgeKey]
    remaining: list[EdgeKey]
    recalled: list[tuple[tuple, EdgeKey]] = field(default_factory=list)
    _heap: list[tuple[tuple, EdgeKey]] | None = None
    _remaining_min: tuple | None = None

    def withheld_count(self) -> int:
        pool = self._heap if self._heap is not None else self.remaining
        return len(self.recalled) + len(pool)

    def remaining_edges(self) -> list[EdgeKey]:
        """Edges still unpoured and never recalled, in no particular order."""
        if self._heap is not None:
            return [edge for _, edge in self._heap]
        return list(self.remaining)

    def peek_withheld_key(self) -> tuple | None:
        """Canonical key of the best re-offerable edge, if any."""
        if self.recalled:
            return self.recalled[0][0]
        if self._heap is not None:
            return self._heap[0][0] if self._heap else None
        if not self.remaining:
            return None
        if self._remaining_min is None:
            self._remaining_min = min(canonical_key(e) for e in self.remaining)
        return self._remaining_min

    def pop_withheld(self) -> EdgeKey:
        if self.recalled:
            return heapq.heappop(self.recalled)[1]
        if self._heap is None:
            self._heap = [(canonical_key(e), e) for e in self.remaining]
            heapq.heapify(self._heap)
            self.remaining = []
        return heapq.heappop(self._heap)[1]

    def push_recalled(self, edge: EdgeKey) -> None:
        heapq.heappush(self.recalled, (canonical_key(edge), edge))


def partition_by_pivot(
    ad: int, neighbors: Sequence[EdgeKey], pivot: Pivot
) -> PartitionedNeighbors:
    """Split `neighbors` around `pivot` in a single unsorted pass.

    A raw-weight pivot pours strictly heavier edges; an exact `EdgeKey`
    pivot pours strict canonical predecessors.  Raw pivots therefore
    under-pour on weight ties, which fine-tuning corrects.
    """
    poured: list[EdgeKey] = []
    remaining: list[EdgeKey] = []
    if isinstance(pivot, EdgeKey):
        boundary = canonical_key(pivot)
        for edge in neighbors:
            (poured if canonical_key(edge) < boundary else remaining).append(edge)
    else:
        threshold = float(pivot)
        for edge in neighbors:
            (poured if edge.weight > threshold else remaining).append(edge)
    return PartitionedNeighbors(ad=ad, poured=poured, remaining=remaining)


@dataclass
class PivotState:
    """Solver state between the initial round and convergence."""

    instance: BipartiteInstance
    parts: list[PartitionedNeighbors]
    ledger: OfferLedger
    deficits: np.ndarray  # reserved minus capacity, per ad, at the last barrier
    schedule: list[int]
    correction_iterations: int = 0
    terminated: bool = False


def initial_solution(
    instance: BipartiteInstance, pivots: Sequence[Pivot], worker_count: int = 1
) -> PivotState:
    """Partition every ad by its pivot and pour in one parallel round."""
    if len(pivots) != instance.num_ads:
        raise PredictorFailureError(
            f"got {len(pivots)} pivots for {instance.num_ads} ads",
            ad_ids=range(min(len(pivots), instance.num_ads), instance.num_ads),
        )
    schedule = worker_schedule(instance.num_ads, worker_count)
    parts = [
        partition_by_pivot(ad, instance.edge_keys(ad), pivots[ad])
        for ad in range(instance.num_ads)
    ]
    ledger = OfferLedger(instance)
    for ad in schedule:
        for edge in parts[ad].poured:
            ledger.offer(edge)
    deficits = np.array(
        [ledger.reserved_count(ad) - int(instance.ad_capacity[ad]) for ad in range(instance.num_ads)],
        dtype=np.int64,
    )
    return PivotState(
        instance=instance, parts=parts, ledger=ledger, deficits=deficits, schedule=schedule
    )


def fine_tune(state: PivotState) -> tuple[Matching, ThresholdVector, int]:
    """Correct the initial solution until it equals the greedy matching.

    Per round, at the barrier, each ad with a surplus recalls that many
    of its worst held offers (consumers promote their next-best live
    offers in their place), and each ad with a deficit pours that many
    of its best withheld edges.  An ad at exactly its capacity still
    pours one withheld edge if it beats the ad's worst held offer: a
    recall can race with an eviction elsewhere and leave the ad holding
    a strictly worse offer than one it withdrew, and without the
    re-offer the result drifts from the greedy matching.
    """
    instance = state.instance
    ledger = state.ledger
    parts = state.parts
    cap = instance.ad_capacity

    # Safety valve: convergence is expected well within this bound, and
    # hitting it means a genuine solver bug rather than a slow instance.
    round_guard = 4 * instance.num_edges + instance.num_ads + 16

    while True:
        recalls: list[EdgeKey] = []
        pours: list[tuple[int, int]] = []
        for ad in state.schedule:
            surplus = ledger.reserved_count(ad) - int(cap[ad])
            state.deficits[ad] = surplus
            if surplus > 0:
                recalls.extend(ledger.reserved[ad][-surplus:])
            elif surplus < 0:
                quota = min(-surplus, parts[ad].withheld_count())
                if quota > 0:
                    pours.append((ad, quota))
            else:
                best = parts[ad].peek_withheld_key()
                if best is not None and best < canonical_key(ledger.worst_reserved(ad)):
                    pours.append((ad, 1))
        if not recalls and not pours:
            break
        state.correction_iterations += 1
        if state.correction_iterations > round_guard:
            raise AssertionError("fine-tune failed to converge; this is a bug")
        for edge in recalls:
            ledger.withdraw(edge)
            parts[edge.ad].push_recalled(edge)
        for ad, quota in pours:
            for _ in range(quota):
                ledger.offer(parts[ad].pop_withheld())

    state.terminated = True
    matching = Matching.from_pairs(instance, ledger.matched_pairs())
    thresholds = thresholds_from_matching(instance, matching.matched)
    return matching, thresholds, state.correction_iterations


def solve_pivot(
    instance: BipartiteInstance,
    predictor,
    worker_count: int = 1,
) -> tuple[Matching, ThresholdVector, RunReport]:
    """Predict pivots, build the initial solution, fine-tune, report.

    `predictor` is either a callable mapping the instance to a pivot
    prediction, or an already computed prediction.  Predictions expose
    `dense(num_ads)` (see `bmatch.predictors`) or are plain sequences
    with one pivot per ad.
    """
    t0 = time.perf_counter()
    try:
        prediction = predictor(instance) if callable(predictor) else predictor
        if hasattr(prediction, "dense"):
            pivots = prediction.dense(instance.num_ads)
            predictor_name = prediction.source
        else:
            pivots = list(prediction)
            predictor_name = "custom"
    except PredictorFailureError:
        raise
    except Exception as exc:
        raise PredictorFailureError(f"predictor failed: {exc}") from exc
    t1 = time.perf_counter()
    state = initial_solution(instance, pivots, worker_count)
    t2 = time.perf_counter()
    matching, thresholds, iterations = fine_tune(state)
    t3 = time.perf_counter()

    report = RunReport(
        instance_digest="",
        solver="pivot",
        predictor=predictor_name,
        matching_value=matching.total_weight,
        iterations=iterations,
        timings={
            "predict": t1 - t0,
            "initial": t2 - t1,
            "finetune": t3 - t2,
            "total": t3 - t0,
        },
        worker_count=worker_count,
    )
    return matching, thresholds, report
