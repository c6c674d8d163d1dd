"""Pivot sources for the warm-start solver.

A prediction assigns every ad either a raw weight estimate or an exact
`EdgeKey` threshold.  Whatever the source, the solver's result is always
the greedy matching; a prediction only shifts how many fine-tune rounds
it takes to get there.  Missing or unusable entries fall back to 0.0,
which pours everything and is always safe.

This module also owns the two on-disk pivot formats:

* ``.piv``: one ``<ad_id> <weight>`` pair per line. The contract with
  external predictors (e.g. a trained model).
* ``.thr``: one ``<ad_id> <weight> <tie_ad> <tie_consumer>`` line per
  ad, an exact threshold dump; ``-inf -1 -1`` marks an ad that poured
  its whole list.

Both formats are plain text, LF line endings, ``#`` comment lines
ignored.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .bsuitor import solve_bsuitor
from .errors import AdIdMismatchError, MalformedLineError
from .graph import BELOW_ALL, BipartiteInstance, EdgeKey

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PivotPrediction:
    """Per-ad pivots plus their provenance.

    `values` is either a dense per-ad sequence or a sparse mapping from
    ad id to raw weight (the file format's natural shape).  `dense`
    produces the per-ad list the solver consumes.
    """

    values: Sequence[EdgeKey | float] | Mapping[int, float]
    source: str

    def dense(self, num_ads: int) -> list[EdgeKey | float]:
        if isinstance(self.values, Mapping):
            out: list[EdgeKey | float] = [0.0] * num_ads
            for ad, value in self.values.items():
                if not 0 <= ad < num_ads:
                    logger.warning("ignoring pivot for unknown ad id %d", ad)
                    continue
                out[ad] = value
            return out
        if len(self.values) != num_ads:
            raise AdIdMismatchError(
                f"prediction covers {len(self.values)} ads, instance has {num_ads}"
            )
        return list(self.values)


def oracle_predictor(instance: BipartiteInstance) -> PivotPrediction:
    """Exact thresholds obtained by actually solving the instance.

    Useful as the upper bound in benchmarks: feeding these pivots back
    into the pivot solver converges with zero fine-tune rounds.
    """
    _, thresholds, _ = solve_bsuitor(instance)
    return PivotPrediction(values=thresholds, source="oracle")


def warmstart_predictor(
    previous: Sequence[EdgeKey], id_map: Mapping[int, int] | None = None
) -> PivotPrediction:
    """Carry thresholds of an earlier solve over to a similar instance.

    Only the raw weights transfer (the old tie-break ids mean nothing
    once weights change); exhausted ads map to 0.0, i.e. pour all.
    `id_map` remaps old ad ids to new ones when the id spaces differ.
    """
    weights = [0.0 if t == BELOW_ALL else float(t.weight) for t in previous]
    if id_map is None:
        return PivotPrediction(values=weights, source="warmstart")
    mapped: dict[int, float] = {}
    for old, new in id_map.items():
        if not 0 <= old < len(previous):
            raise AdIdMismatchError(f"id_map references unknown previous ad {old}")
        mapped[int(new)] = weights[old]
    return PivotPrediction(values=mapped, source="warmstart")


def quantile_predictor(instance: BipartiteInstance) -> PivotPrediction:
    """Competition-blind pivot: each ad's (b(a)+1)-th largest weight.

    Selected in linear time, without sorting.  The initial pour is then
    the ad's own top-b(a) edges (modulo weight ties), which is exact
    whenever no two ads compete for a consumer.
    """
    pivots: list[float] = []
    for ad in range(instance.num_ads):
        _, weights = instance.neighbors(ad)
        cap = int(instance.ad_capacity[ad])
        if len(weights) <= cap:
            pivots.append(0.0)
        else:
            pos = len(weights) - cap - 1
            pivots.append(float(np.partition(weights, pos)[pos]))
    return PivotPrediction(values=pivots, source="quantile")


def file_predictor(path) -> PivotPrediction:
    """Raw-weight predictions from a ``.piv`` file.

    Ads absent from the file default to 0.0 when the prediction is
    densified; NaN and negative entries are clamped to 0.0 as well.
    """
    values: dict[int, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != 2:
                raise MalformedLineError(f"{path}:{lineno}: expected '<ad_id> <weight>'")
            try:
                ad = int(fields[0])
                weight = float(fields[1])
            except ValueError as exc:
                raise MalformedLineError(f"{path}:{lineno}: {exc}") from exc
            if math.isnan(weight) or weight < 0.0:
                weight = 0.0
            values[ad] = weight
    return PivotPrediction(values=values, source="file")


def write_pivots(path, pivots: Mapping[int, float] | Sequence[float]) -> None:
    """Write raw-weight predictions in ``.piv`` format."""
    items = (
        sorted(pivots.items()) if isinstance(pivots, Mapping) else enumerate(pivots)
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ad, weight in items:
            fh.write(f"{ad} {float(weight)!r}\n")


def write_thresholds(path, thresholds: Sequence[EdgeKey]) -> None:
    """Dump exact thresholds in ``.thr`` format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ad, t in enumerate(thresholds):
            if t == BELOW_ALL:
                fh.write(f"{ad} -inf -1 -1\n")
            else:
                fh.write(f"{ad} {t.weight!r} {t.ad} {t.consumer}\n")


def read_thresholds(path) -> list[EdgeKey]:
    """Read a ``.thr`` dump back into a threshold vector.

    Lines may arrive in any order; every ad id from 0 to the maximum
    present must occur exactly once.
    """
    entries: dict[int, EdgeKey] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != 4:
                raise MalformedLineError(
                    f"{path}:{lineno}: expected '<ad_id> <weight> <tie_ad> <tie_consumer>'"
                )
            try:
                ad = int(fields[0])
                weight = float(fields[1])
                tie_ad = int(fields[2])
                tie_consumer = int(fields[3])
            except ValueError as exc:
                raise MalformedLineError(f"{path}:{lineno}: {exc}") from exc
            if ad in entries:
                raise MalformedLineError(f"{path}:{lineno}: duplicate ad id {ad}")
            if math.isinf(weight) and weight < 0:
                entries[ad] = BELOW_ALL
            else:
                entries[ad] = EdgeKey(weight, tie_ad, tie_consumer)
    if entries and sorted(entries) != list(range(max(entries) + 1)):
        raise MalformedLineError(f"{path}: ad ids are not contiguous from 0")
    return [entries[ad] for ad in sorted(entries)]
