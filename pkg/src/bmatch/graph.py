"""Core data model: weighted bipartite instances, matchings, and the
canonical edge order every solver in this package shares.

An instance connects `num_ads` ad vertices to `num_consumers` consumer
vertices through positively weighted edges.  Each vertex carries a
capacity: the maximum number of matched edges it may be incident to.
Instances are immutable after construction so solvers can share them
freely across workers; all mutable state lives in the solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import (
    DuplicateEdgeError,
    IdOutOfRangeError,
    NonPositiveWeightError,
    UnknownEdgeError,
)


class EdgeKey(NamedTuple):
    """An edge identified by (weight, ad, consumer).

    Sorting `EdgeKey`s with :func:`canonical_key` gives the total order
    used everywhere in this package: weight descending, then ad id
    ascending, then consumer id ascending.  Breaking weight ties by the
    ids makes every solver's output identical on instances with
    duplicate weights.
    """

    weight: float
    ad: int
    consumer: int


#: Sentinel threshold for an ad that poured its whole neighbor list.
#: It compares after every real edge under the canonical order.
BELOW_ALL = EdgeKey(float("-inf"), -1, -1)


def canonical_key(edge: EdgeKey) -> tuple[float, int, int]:
    """Sort key realizing the canonical edge order (ascending)."""
    return (-edge[0], edge[1], edge[2])


def canonical_edge_compare(e1: EdgeKey, e2: EdgeKey) -> int:
    """Three-way comparison under the canonical order.

    Returns -1 if `e1` precedes `e2`, 1 if it follows, 0 if equal.
    """
    k1, k2 = canonical_key(e1), canonical_key(e2)
    if k1 < k2:
        return -1
    if k1 > k2:
        return 1
    return 0


@dataclass(frozen=True, eq=False)
class BipartiteInstance:
    """Immutable b-matching instance in adjacency (CSR) form.

    Edges are stored grouped by ad, each group sorted by consumer id, so
    `adj_consumer[adj_indptr[a]:adj_indptr[a + 1]]` lists ad `a`'s
    neighbors and `adj_weight` the matching weights.  Use
    :func:`build_instance` instead of the constructor; it validates and
    canonicalizes the input.
    """

    num_ads: int
    num_consumers: int
    ad_capacity: np.ndarray
    consumer_capacity: np.ndarray
    adj_indptr: np.ndarray
    adj_consumer: np.ndarray
    adj_weight: np.ndarray
    _pair_weight: dict[tuple[int, int], float] = field(repr=False)

    @property
    def num_edges(self) -> int:
        return int(self.adj_consumer.shape[0])

    def degree(self, ad: int) -> int:
        return int(self.adj_indptr[ad + 1] - self.adj_indptr[ad])

    def neighbors(self, ad: int) -> tuple[np.ndarray, np.ndarray]:
        """(consumer ids, weights) of ad `ad`, in stored order."""
        lo, hi = self.adj_indptr[ad], self.adj_indptr[ad + 1]
        return self.adj_consumer[lo:hi], self.adj_weight[lo:hi]

    def edge_keys(self, ad: int) -> list[EdgeKey]:
        """Ad `ad`'s incident edges as `EdgeKey`s, in stored order."""
        cons, ws = self.neighbors(ad)
        return [EdgeKey(float(w), ad, int(c)) for c, w in zip(cons, ws)]

    def iter_edges(self) -> Iterator[EdgeKey]:
        for ad in range(self.num_ads):
            yield from self.edge_keys(ad)

    def weight_of(self, ad: int, consumer: int) -> float:
        try:
            return self._pair_weight[(ad, consumer)]
        except KeyError:
            raise UnknownEdgeError(f"no edge ({ad}, {consumer}) in instance") from None

    def has_edge(self, ad: int, consumer: int) -> bool:
        return (ad, consumer) in self._pair_weight


def default_capacities(
    num_ads: int,
    num_consumers: int,
    ad_degrees: np.ndarray,
    consumer_degrees: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Degree-scaled capacity rule used when none are given explicitly.

    Ads get `ceil(degree / 2)`; consumers get `min(B, degree)` where `B`
    is the mean consumer degree rounded up.  Every capacity is clamped
    to at least 1 so isolated vertices stay representable.
    """
    ad_cap = np.maximum(1, (ad_degrees + 1) // 2).astype(np.int64)
    if num_consumers > 0 and consumer_degrees.sum() > 0:
        mean_deg = int(math.ceil(consumer_degrees.sum() / num_consumers))
    else:
        mean_deg = 1
    cons_cap = np.maximum(1, np.minimum(mean_deg, consumer_degrees)).astype(np.int64)
    return ad_cap, cons_cap


def _capacity_array(spec, count: int, degrees: np.ndarray, side: str) -> np.ndarray:
    if isinstance(spec, (int, np.integer)):
        arr = np.full(count, int(spec), dtype=np.int64)
    else:
        arr = np.asarray(list(spec), dtype=np.int64)
        if arr.shape != (count,):
            raise IdOutOfRangeError(
                f"{side} capacity list has length {arr.shape[0]}, expected {count}"
            )
    if count and arr.min() < 1:
        raise IdOutOfRangeError(f"{side} capacities must be >= 1")
    return arr


def build_instance(
    num_ads: int,
    num_consumers: int,
    edges: Iterable[tuple[int, int, float]],
    ad_capacity=None,
    consumer_capacity=None,
) -> BipartiteInstance:
    """Validate raw edges and build an immutable instance.

    `edges` yields (ad, consumer, weight) triples.  Capacities may be a
    per-vertex sequence, a single integer applied uniformly, or None to
    apply the degree-scaled default rule (see :func:`default_capacities`).

    Raises:
        IdOutOfRangeError: vertex id outside the declared range.
        NonPositiveWeightError: weight not a strictly positive finite number.
        DuplicateEdgeError: repeated (ad, consumer) pair.
    """
    if num_ads < 0 or num_consumers < 0:
        raise IdOutOfRangeError("vertex counts must be non-negative")

    triples = [(int(a), int(c), float(w)) for a, c, w in edges]
    for a, c, w in triples:
        if not 0 <= a < num_ads:
            raise IdOutOfRangeError(f"ad id {a} outside [0, {num_ads})")
        if not 0 <= c < num_consumers:
            raise IdOutOfRangeError(f"consumer id {c} outside [0, {num_consumers})")
        if not (math.isfinite(w) and w > 0.0):
            raise NonPositiveWeightError(f"edge ({a}, {c}) has weight {w!r}")

    triples.sort(key=lambda t: (t[0], t[1]))
    pair_weight: dict[tuple[int, int], float] = {}
    for a, c, w in triples:
        if (a, c) in pair_weight:
            raise DuplicateEdgeError(f"duplicate edge ({a}, {c})")
        pair_weight[(a, c)] = w

    ads = np.fromiter((t[0] for t in triples), dtype=np.int64, count=len(triples))
    cons = np.fromiter((t[1] for t in triples), dtype=np.int64, count=len(triples))
    ws = np.fromiter((t[2] for t in triples), dtype=np.float64, count=len(triples))

    indptr = np.zeros(num_ads + 1, dtype=np.int64)
    np.add.at(indptr, ads + 1, 1)
    np.cumsum(indptr, out=indptr)

    ad_degrees = np.diff(indptr)
    consumer_degrees = np.zeros(num_consumers, dtype=np.int64)
    np.add.at(consumer_degrees, cons, 1)

    if ad_capacity is None and consumer_capacity is None:
        ad_cap, cons_cap = default_capacities(
            num_ads, num_consumers, ad_degrees, consumer_degrees
        )
    else:
        default_ad, default_cons = default_capacities(
            num_ads, num_consumers, ad_degrees, consumer_degrees
        )
        ad_cap = (
            default_ad
            if ad_capacity is None
            else _capacity_array(ad_capacity, num_ads, ad_degrees, "ad")
        )
        cons_cap = (
            default_cons
            if consumer_capacity is None
            else _capacity_array(consumer_capacity, num_consumers, consumer_degrees, "consumer")
        )

    for arr in (ad_cap, cons_cap, indptr, cons, ws):
        arr.flags.writeable = False

    return BipartiteInstance(
        num_ads=num_ads,
        num_consumers=num_consumers,
        ad_capacity=ad_cap,
        consumer_capacity=cons_cap,
        adj_indptr=indptr,
        adj_consumer=cons,
        adj_weight=ws,
        _pair_weight=pair_weight,
    )


@dataclass(frozen=True)
class Matching:
    """A feasible-by-contract set of matched edges and its total weight."""

    matched: frozenset[tuple[int, int]]
    total_weight: float

    @classmethod
    def from_pairs(
        cls, instance: BipartiteInstance, pairs: Iterable[tuple[int, int]]
    ) -> "Matching":
        """Build a matching from (ad, consumer) pairs, recomputing the weight.

        Raises UnknownEdgeError if a pair is not an instance edge.
        """
        matched = frozenset((int(a), int(c)) for a, c in pairs)
        total = math.fsum(instance.weight_of(a, c) for a, c in sorted(matched))
        return cls(matched=matched, total_weight=total)

    def __len__(self) -> int:
        return len(self.matched)


@dataclass(frozen=True)
class CapacityViolation:
    side: str  # "ad" or "consumer"
    vertex: int
    used: int
    capacity: int


def verify_feasible(
    instance: BipartiteInstance, matching: Matching | Iterable[tuple[int, int]]
) -> tuple[bool, list[CapacityViolation]]:
    """Check both capacity families; list every offending vertex.

    Raises UnknownEdgeError if the matching contains a pair that is not
    an edge of the instance.
    """
    pairs = matching.matched if isinstance(matching, Matching) else set(matching)
    ad_used = np.zeros(instance.num_ads, dtype=np.int64)
    cons_used = np.zeros(instance.num_consumers, dtype=np.int64)
    for a, c in pairs:
        instance.weight_of(a, c)  # raises UnknownEdgeError
        ad_used[a] += 1
        cons_used[c] += 1

    violations: list[CapacityViolation] = []
    for a in np.nonzero(ad_used > instance.ad_capacity)[0]:
        violations.append(
            CapacityViolation("ad", int(a), int(ad_used[a]), int(instance.ad_capacity[a]))
        )
    for c in np.nonzero(cons_used > instance.consumer_capacity)[0]:
        violations.append(
            CapacityViolation(
                "consumer", int(c), int(cons_used[c]), int(instance.consumer_capacity[c])
            )
        )
    return (not violations, violations)


def canonical_sorted_adjacency(instance: BipartiteInstance) -> list[list[EdgeKey]]:
    """Each ad's incident edges sorted by the canonical order.

    This is the explicit per-ad sort that the pivot solver exists to
    avoid; the baselines use it directly.
    """
    out: list[list[EdgeKey]] = []
    for ad in range(instance.num_ads):
        keys = instance.edge_keys(ad)
        keys.sort(key=canonical_key)
        out.append(keys)
    return out


def global_sorted_edges(instance: BipartiteInstance) -> list[EdgeKey]:
    """All edges of the instance sorted by the canonical order."""
    edges = [key for ad in range(instance.num_ads) for key in instance.edge_keys(ad)]
    edges.sort(key=canonical_key)
    return edges
