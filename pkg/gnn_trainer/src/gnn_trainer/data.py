"""File parsing and feature extraction.

This package talks to the solver exclusively through its text formats:
it reads ``.bmg`` instances and ``.thr`` threshold labels, and writes
``.piv`` predictions.  The parsers here are deliberately independent of
the solver package.

Features are plain per-node summaries.  For an ad: capacity, degree,
and weight statistics of its incident edges, including the weights at
ranks around the capacity (the threshold sits near there when nobody
competes; the network's job is to learn the competition offset).  For a
neighbor row: the connecting edge's weight plus the consumer's own
degree, capacity, and weight statistics, including how many of the
consumer's edges outrank the connecting one.

All weight-valued features and labels are scaled per instance by the
instance's global weight range, which is known at prediction time, so
predictions can be mapped back to raw weights for any unseen instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedFileError

#: Ads with more neighbors than this are represented by their heaviest
#: edges only; prediction still covers every ad.
MAX_NEIGHBORS = 1024

AD_FEATURES = 12
NEIGHBOR_FEATURES = 7


@dataclass
class Instance:
    """Parsed ``.bmg`` instance, adjacency grouped per ad."""

    num_ads: int
    num_consumers: int
    ad_capacity: np.ndarray
    consumer_capacity: np.ndarray
    ad_neighbors: list[np.ndarray]  # consumer ids per ad
    ad_weights: list[np.ndarray]  # matching weights per ad
    weight_low: float = field(default=0.0)
    weight_high: float = field(default=1.0)

    def weight_scale(self) -> tuple[float, float]:
        """(offset, span) mapping raw weights into roughly [0, 1]."""
        span = self.weight_high - self.weight_low
        return (self.weight_low, span if span > 0 else 1.0)


def read_instance(path) -> Instance:
    header = None
    ad_caps: dict[int, int] = {}
    cons_caps: dict[int, int] = {}
    edges: list[tuple[int, int, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
        if first != "bmg 1":
            raise MalformedFileError(f"{path}: expected 'bmg 1' header")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            try:
                if fields[0] == "g" and len(fields) == 4:
                    header = (int(fields[1]), int(fields[2]), int(fields[3]))
                elif fields[0] == "ba" and len(fields) == 3:
                    ad_caps[int(fields[1])] = int(fields[2])
                elif fields[0] == "bc" and len(fields) == 3:
                    cons_caps[int(fields[1])] = int(fields[2])
                elif fields[0] == "e" and len(fields) == 4:
                    edges.append((int(fields[1]), int(fields[2]), float(fields[3])))
                else:
                    raise MalformedFileError(f"{path}:{lineno}: bad line {line!r}")
            except ValueError as exc:
                raise MalformedFileError(f"{path}:{lineno}: {exc}") from exc
    if header is None:
        raise MalformedFileError(f"{path}: missing 'g' line")
    num_ads, num_consumers, num_edges = header
    if len(edges) != num_edges:
        raise MalformedFileError(f"{path}: edge count mismatch")

    by_ad: list[list[tuple[int, float]]] = [[] for _ in range(num_ads)]
    cons_degree = np.zeros(num_consumers, dtype=np.int64)
    for a, c, w in edges:
        by_ad[a].append((c, w))
        cons_degree[c] += 1

    # Capacity fallback mirrors the instance format's documented default:
    # ads get ceil(degree/2), consumers min(mean consumer degree rounded
    # up, degree), everything clamped to >= 1.
    ad_capacity = np.ones(num_ads, dtype=np.int64)
    for a in range(num_ads):
        ad_capacity[a] = ad_caps.get(a, max(1, (len(by_ad[a]) + 1) // 2))
    mean_deg = max(1, math.ceil(cons_degree.sum() / num_consumers)) if num_consumers else 1
    consumer_capacity = np.ones(num_consumers, dtype=np.int64)
    for c in range(num_consumers):
        consumer_capacity[c] = cons_caps.get(c, max(1, min(mean_deg, int(cons_degree[c]))))

    ad_neighbors = []
    ad_weights = []
    for a in range(num_ads):
        pairs = sorted(by_ad[a])
        ad_neighbors.append(np.array([c for c, _ in pairs], dtype=np.int64))
        ad_weights.append(np.array([w for _, w in pairs], dtype=np.float64))

    all_w = [w for _, _, w in edges]
    return Instance(
        num_ads=num_ads,
        num_consumers=num_consumers,
        ad_capacity=ad_capacity,
        consumer_capacity=consumer_capacity,
        ad_neighbors=ad_neighbors,
        ad_weights=ad_weights,
        weight_low=min(all_w) if all_w else 0.0,
        weight_high=max(all_w) if all_w else 1.0,
    )


def read_labels(path, num_ads: int) -> list[float | None]:
    """Raw-weight threshold labels from a ``.thr`` dump.

    ``None`` marks an exhausted ad (the solver poured its whole list).
    """
    labels: list[float | None] = [None] * num_ads
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 4:
                raise MalformedFileError(f"{path}:{lineno}: expected 4 fields")
            try:
                ad = int(fields[0])
                weight = float(fields[1])
            except ValueError as exc:
                raise MalformedFileError(f"{path}:{lineno}: {exc}") from exc
            if not 0 <= ad < num_ads:
                raise MalformedFileError(f"{path}:{lineno}: ad id {ad} out of range")
            if ad in seen:
                raise MalformedFileError(f"{path}:{lineno}: duplicate ad {ad}")
            seen.add(ad)
            labels[ad] = None if math.isinf(weight) and weight < 0 else weight
    if len(seen) != num_ads:
        raise MalformedFileError(f"{path}: labels cover {len(seen)} of {num_ads} ads")
    return labels


def write_pivots(path, pivots: dict[int, float]) -> None:
    """Write raw-weight predictions in ``.piv`` format, non-negative."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ad in sorted(pivots):
            fh.write(f"{ad} {max(0.0, float(pivots[ad]))!r}\n")


@dataclass
class AdSample:
    """Everything the model needs for one ad."""

    ad_id: int
    features: np.ndarray  # (AD_FEATURES,)
    neighbor_features: np.ndarray  # (n, NEIGHBOR_FEATURES), n may be 0
    label: float | None = None  # normalized threshold, if known


def _consumer_stats(instance: Instance) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    """Per-consumer degree, mean weight, and sorted (desc) incident weights."""
    degree = np.zeros(instance.num_consumers, dtype=np.int64)
    sums = np.zeros(instance.num_consumers, dtype=np.float64)
    incident: list[list[float]] = [[] for _ in range(instance.num_consumers)]
    for a in range(instance.num_ads):
        for c, w in zip(instance.ad_neighbors[a], instance.ad_weights[a]):
            degree[c] += 1
            sums[c] += w
            incident[c].append(w)
    means = np.divide(sums, np.maximum(degree, 1))
    sorted_desc = [np.sort(np.array(ws))[::-1] for ws in incident]
    return degree, means, sorted_desc


def extract_samples(
    instance: Instance,
    labels: list[float | None] | None = None,
    max_neighbors: int = MAX_NEIGHBORS,
) -> list[AdSample]:
    """Build one sample per ad; attach normalized labels when given."""
    low, span = instance.weight_scale()

    def norm(w: float) -> float:
        return (w - low) / span

    cons_degree, cons_mean, cons_sorted = _consumer_stats(instance)
    samples = []
    for ad in range(instance.num_ads):
        weights = instance.ad_weights[ad]
        neighbors = instance.ad_neighbors[ad]
        cap = int(instance.ad_capacity[ad])
        degree = len(weights)

        if degree > max_neighbors:
            keep = np.argsort(weights)[::-1][:max_neighbors]
            keep.sort()
            weights = weights[keep]
            neighbors = neighbors[keep]
            degree = max_neighbors

        if degree:
            sorted_w = np.sort(weights)[::-1]
            # weights at ranks around the capacity (clamped to the list)
            window = [
                norm(float(sorted_w[min(max(r, 0), degree - 1)]))
                for r in (cap - 2, cap - 1, cap, cap + 1, cap + 2)
            ]
            stats = [
                norm(float(weights.min())),
                norm(float(weights.max())),
                norm(float(weights.mean())),
                float(weights.std()) / span,
            ]
        else:
            window = [0.0] * 5
            stats = [0.0] * 4
        features = np.array(
            [
                cap / (1.0 + degree),
                math.log1p(degree) / 8.0,
                min(cap, 64) / 64.0,
                *stats,
                *window,
            ],
            dtype=np.float64,
        )
        assert features.shape == (AD_FEATURES,)

        rows = np.zeros((degree, NEIGHBOR_FEATURES), dtype=np.float64)
        for i, (c, w) in enumerate(zip(neighbors, weights)):
            heavier = float(np.searchsorted(-cons_sorted[c], -w))  # strictly heavier
            c_deg = float(cons_degree[c])
            c_cap = float(instance.consumer_capacity[c])
            rows[i] = (
                norm(float(w)),
                math.log1p(c_deg) / 8.0,
                min(c_cap, 32) / 32.0,
                norm(float(cons_sorted[c][0])) if c_deg else 0.0,
                norm(float(cons_mean[c])),
                heavier / max(c_deg, 1.0),
                (heavier + 1.0 - c_cap) / (1.0 + c_deg),
            )

        label = None
        if labels is not None:
            raw = labels[ad]
            if raw is None:
                # exhausted ad: just below its lightest incident weight
                base = float(weights.min()) if degree else low
                raw = base - 0.02 * span
            label = norm(raw)
        samples.append(
            AdSample(ad_id=ad, features=features, neighbor_features=rows, label=label)
        )
    return samples
