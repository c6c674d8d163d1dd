"""Instance serialization, synthetic generators, and reweighting.

The on-disk format (``.bmg``) is line-oriented text::

    bmg 1
    g <num_ads> <num_consumers> <num_edges>
    ba <ad_id> <capacity>          (optional, any subset of ads)
    bc <consumer_id> <capacity>    (optional, any subset of consumers)
    e <ad_id> <consumer_id> <weight>   (exactly num_edges lines)

Ids are 0-based, lines after the first may include ``#`` comment lines,
weights round-trip exactly (shortest decimal representation).  Vertices
without an explicit capacity line get the degree-scaled default rule.
Writing always emits explicit capacities so write/read is the identity.

Generators are pure functions of their configuration and seed: the same
inputs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    CountMismatchError,
    InfeasibleConfigError,
    MalformedHeaderError,
)
from .graph import BipartiteInstance, build_instance

#: Perturbed weights are clamped here to stay strictly positive.
WEIGHT_FLOOR = 1e-9


# ---------------------------------------------------------------------------
# serialization


def instance_to_text(instance: BipartiteInstance) -> str:
    out = io.StringIO()
    out.write("bmg 1\n")
    out.write(f"g {instance.num_ads} {instance.num_consumers} {instance.num_edges}\n")
    for ad in range(instance.num_ads):
        out.write(f"ba {ad} {int(instance.ad_capacity[ad])}\n")
    for c in range(instance.num_consumers):
        out.write(f"bc {c} {int(instance.consumer_capacity[c])}\n")
    for ad in range(instance.num_ads):
        cons, ws = instance.neighbors(ad)
        for c, w in zip(cons, ws):
            out.write(f"e {ad} {c} {float(w)!r}\n")
    return out.getvalue()


def instance_from_text(text: str, source: str = "<string>") -> BipartiteInstance:
    lines = text.split("\n")
    if not lines or lines[0].strip() != "bmg 1":
        raise MalformedHeaderError(f"{source}: first line must be 'bmg 1'")

    header = None
    ad_caps: dict[int, int] = {}
    cons_caps: dict[int, int] = {}
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if fields[0] == "g" and len(fields) == 4:
                if header is not None:
                    raise MalformedHeaderError(f"{source}:{lineno}: duplicate 'g' line")
                header = (int(fields[1]), int(fields[2]), int(fields[3]))
            elif fields[0] == "ba" and len(fields) == 3:
                ad_caps[int(fields[1])] = int(fields[2])
            elif fields[0] == "bc" and len(fields) == 3:
                cons_caps[int(fields[1])] = int(fields[2])
            elif fields[0] == "e" and len(fields) == 4:
                edges.append((int(fields[1]), int(fields[2]), float(fields[3])))
            else:
                raise MalformedHeaderError(f"{source}:{lineno}: unrecognized line {line!r}")
        except ValueError as exc:
            raise MalformedHeaderError(f"{source}:{lineno}: {exc}") from exc

    if header is None:
        raise MalformedHeaderError(f"{source}: missing 'g' line")
    num_ads, num_consumers, num_edges = header
    if len(edges) != num_edges:
        raise CountMismatchError(
            f"{source}: header declares {num_edges} edges, found {len(edges)}"
        )

    instance = build_instance(num_ads, num_consumers, edges)
    if ad_caps or cons_caps:
        ad_capacity = instance.ad_capacity.copy()
        for ad, cap in ad_caps.items():
            ad_capacity[ad] = cap
        consumer_capacity = instance.consumer_capacity.copy()
        for c, cap in cons_caps.items():
            consumer_capacity[c] = cap
        instance = build_instance(
            num_ads, num_consumers, edges, ad_capacity, consumer_capacity
        )
    return instance


def write_instance(instance: BipartiteInstance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(instance_to_text(instance))


def read_instance(path) -> BipartiteInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_text(fh.read(), source=str(path))


def instance_digest(instance: BipartiteInstance) -> str:
    """Content hash of the canonical serialization."""
    return hashlib.sha256(instance_to_text(instance).encode("utf-8")).hexdigest()


def instances_equal(a: BipartiteInstance, b: BipartiteInstance) -> bool:
    return (
        a.num_ads == b.num_ads
        and a.num_consumers == b.num_consumers
        and np.array_equal(a.ad_capacity, b.ad_capacity)
        and np.array_equal(a.consumer_capacity, b.consumer_capacity)
        and np.array_equal(a.adj_indptr, b.adj_indptr)
        and np.array_equal(a.adj_consumer, b.adj_consumer)
        and np.array_equal(a.adj_weight, b.adj_weight)
    )


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class DegreeSpec:
    """Per-ad degree distribution: 'fixed', 'uniform', or 'powerlaw'."""

    kind: str
    low: int
    high: int
    alpha: float = 2.0

    @classmethod
    def fixed(cls, k: int) -> "DegreeSpec":
        return cls("fixed", k, k)

    @classmethod
    def uniform(cls, low: int, high: int) -> "DegreeSpec":
        return cls("uniform", low, high)

    @classmethod
    def powerlaw(cls, alpha: float, low: int, high: int) -> "DegreeSpec":
        return cls("powerlaw", low, high, alpha)


@dataclass(frozen=True)
class WeightSpec:
    """Edge weight distribution: 'uniform', 'exponential', or 'integer'.

    'integer' draws whole numbers from [low, high], deliberately
    producing ties.
    """

    kind: str
    low: float = 0.0
    high: float = 1.0
    scale: float = 1.0

    @classmethod
    def uniform(cls, low: float, high: float) -> "WeightSpec":
        return cls("uniform", low=low, high=high)

    @classmethod
    def exponential(cls, scale: float) -> "WeightSpec":
        return cls("exponential", scale=scale)

    @classmethod
    def integer(cls, low: int, high: int) -> "WeightSpec":
        return cls("integer", low=low, high=high)


@dataclass(frozen=True)
class CapacityRule:
    """How capacities are assigned: 'default', 'uniform', or 'explicit'."""

    kind: str = "default"
    uniform_value: int = 1
    ad_capacity: tuple[int, ...] | None = None
    consumer_capacity: tuple[int, ...] | None = None

    @classmethod
    def default(cls) -> "CapacityRule":
        return cls("default")

    @classmethod
    def uniform(cls, k: int) -> "CapacityRule":
        return cls("uniform", uniform_value=k)

    @classmethod
    def explicit(cls, ad_capacity: Sequence[int], consumer_capacity: Sequence[int]) -> "CapacityRule":
        return cls(
            "explicit",
            ad_capacity=tuple(ad_capacity),
            consumer_capacity=tuple(consumer_capacity),
        )


@dataclass(frozen=True)
class GeneratorConfig:
    num_ads: int
    num_consumers: int
    degrees: DegreeSpec
    weights: WeightSpec
    capacities: CapacityRule = CapacityRule()
    seed: int = 0


def _draw_degrees(config: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
    spec = config.degrees
    n = config.num_ads
    if spec.low < 0 or spec.high < spec.low:
        raise InfeasibleConfigError(f"bad degree range [{spec.low}, {spec.high}]")
    if spec.high > config.num_consumers:
        raise InfeasibleConfigError(
            f"degree {spec.high} exceeds {config.num_consumers} consumers"
        )
    if spec.kind == "fixed":
        return np.full(n, spec.low, dtype=np.int64)
    if spec.kind == "uniform":
        return rng.integers(spec.low, spec.high + 1, size=n)
    if spec.kind == "powerlaw":
        support = np.arange(spec.low, spec.high + 1, dtype=np.float64)
        if support.size == 0:
            raise InfeasibleConfigError("empty power-law support")
        probs = support ** (-spec.alpha)
        probs /= probs.sum()
        return rng.choice(np.arange(spec.low, spec.high + 1), size=n, p=probs)
    raise InfeasibleConfigError(f"unknown degree kind {spec.kind!r}")


def _draw_weights(config: GeneratorConfig, rng: np.random.Generator, size: int) -> np.ndarray:
    spec = config.weights
    if spec.kind == "uniform":
        if not (0 <= spec.low < spec.high):
            raise InfeasibleConfigError("uniform weights need 0 <= low < high")
        ws = rng.uniform(spec.low, spec.high, size=size)
        return np.maximum(ws, WEIGHT_FLOOR)
    if spec.kind == "exponential":
        if spec.scale <= 0:
            raise InfeasibleConfigError("exponential scale must be positive")
        return np.maximum(rng.exponential(spec.scale, size=size), WEIGHT_FLOOR)
    if spec.kind == "integer":
        low, high = int(spec.low), int(spec.high)
        if low < 1 or high < low:
            raise InfeasibleConfigError("integer weights need 1 <= low <= high")
        return rng.integers(low, high + 1, size=size).astype(np.float64)
    raise InfeasibleConfigError(f"unknown weight kind {spec.kind!r}")


def generate(config: GeneratorConfig) -> BipartiteInstance:
    """Deterministically generate an instance from a config and seed."""
    if config.num_ads < 0 or config.num_consumers < 0:
        raise InfeasibleConfigError("vertex counts must be non-negative")
    rng = np.random.default_rng(config.seed)
    degrees = _draw_degrees(config, rng)

    edges: list[tuple[int, int, float]] = []
    for ad in range(config.num_ads):
        deg = int(degrees[ad])
        if deg == 0:
            continue
        consumers = rng.choice(config.num_consumers, size=deg, replace=False)
        weights = _draw_weights(config, rng, deg)
        edges.extend((ad, int(c), float(w)) for c, w in zip(consumers, weights))

    rule = config.capacities
    if rule.kind == "default":
        return build_instance(config.num_ads, config.num_consumers, edges)
    if rule.kind == "uniform":
        if rule.uniform_value < 1:
            raise InfeasibleConfigError("uniform capacity must be >= 1")
        return build_instance(
            config.num_ads, config.num_consumers, edges,
            rule.uniform_value, rule.uniform_value,
        )
    if rule.kind == "explicit":
        return build_instance(
            config.num_ads, config.num_consumers, edges,
            rule.ad_capacity, rule.consumer_capacity,
        )
    raise InfeasibleConfigError(f"unknown capacity rule {rule.kind!r}")


def perturb(instance: BipartiteInstance, sigma_sq: float, seed: int) -> BipartiteInstance:
    """Gaussian-reweight an instance, keeping topology and capacities.

    Adds zero-mean noise of variance `sigma_sq` to every weight and
    clamps at a small positive floor.  The same (instance, sigma_sq,
    seed) always produces the same result.
    """
    if sigma_sq < 0:
        raise InfeasibleConfigError("sigma_sq must be non-negative")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, math.sqrt(sigma_sq), size=instance.num_edges)
    new_weights = np.maximum(instance.adj_weight + noise, WEIGHT_FLOOR)
    edges = []
    for ad in range(instance.num_ads):
        lo, hi = instance.adj_indptr[ad], instance.adj_indptr[ad + 1]
        edges.extend(
            (ad, int(c), float(w))
            for c, w in zip(instance.adj_consumer[lo:hi], new_weights[lo:hi])
        )
    return build_instance(
        instance.num_ads,
        instance.num_consumers,
        edges,
        instance.ad_capacity,
        instance.consumer_capacity,
    )


# ---------------------------------------------------------------------------
# presets


def _walkthrough_2x4() -> BipartiteInstance:
    # Two ads with capacity 2; four consumers with capacity 1; weights
    # chosen so one offer gets squeezed out and re-poured.
    edges = [
        (0, 0, 8.0), (0, 1, 6.0), (0, 2, 4.0), (0, 3, 2.0),
        (1, 0, 3.0), (1, 1, 7.0), (1, 2, 1.0), (1, 3, 9.0),
    ]
    return build_instance(2, 4, edges, [2, 2], [1, 1, 1, 1])


#: Named fixture instances reachable from the command line.
PRESETS = {"fig1": _walkthrough_2x4}


def preset_instance(name: str) -> BipartiteInstance:
    try:
        return PRESETS[name]()
    except KeyError:
        raise InfeasibleConfigError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}"
        ) from None
