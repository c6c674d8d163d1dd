#!/usr/bin/env python3
"""How close is greedy to the true optimum on small instances?

The worst-case guarantee is one half, but on random instances the
greedy matching is usually within a few percent of optimal.  The exact
solver is a branch-and-bound over edge decisions, so keep the instances
small.
"""

import random

from bmatch import (
    DegreeSpec,
    GeneratorConfig,
    WeightSpec,
    generate,
    solve_exact,
    solve_serial_greedy,
)

rng = random.Random(404)
ratios = []
nodes = []
for i in range(200):
    consumers = rng.randint(3, 10)
    config = GeneratorConfig(
        num_ads=rng.randint(2, 8),
        num_consumers=consumers,
        degrees=DegreeSpec.uniform(1, min(4, consumers)),
        weights=WeightSpec.uniform(0.1, 9.0) if i % 2 else WeightSpec.integer(1, 9),
        seed=60_000 + i,
    )
    instance = generate(config)
    if not 1 <= instance.num_edges <= 40:
        continue
    greedy, _ = solve_serial_greedy(instance)
    result = solve_exact(instance)
    ratios.append(greedy.total_weight / result.optimal_value)
    nodes.append(result.node_count)

ratios.sort()
n = len(ratios)
print(f"instances        : {n}")
print(f"min ratio        : {ratios[0]:.4f}   (guarantee: 0.5)")
print(f"median ratio     : {ratios[n // 2]:.4f}")
print(f"mean ratio       : {sum(ratios) / n:.4f}")
print(f"exactly optimal  : {sum(r > 0.999999 for r in ratios)}/{n}")
print(f"mean search nodes: {sum(nodes) / n:.0f}")
