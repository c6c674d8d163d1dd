#!/usr/bin/env python3
"""Walk through the pour process on a tiny instance, step by step.

Two ads want two consumers each; four consumers accept one ad each.
Sorting ad 0's weights gives (8, 6, 4, 2) and ad 1's gives (9, 7, 3, 1).
Watch the offer with weight 6 get squeezed out by the competing 7 and
ad 0 recover by pouring its next edge.
"""

from bmatch import (
    build_instance,
    oracle_predictor,
    solve_bsuitor,
    solve_pivot,
    solve_serial_greedy,
    verify_feasible,
)

edges = [
    (0, 0, 8.0), (0, 1, 6.0), (0, 2, 4.0), (0, 3, 2.0),
    (1, 0, 3.0), (1, 1, 7.0), (1, 2, 1.0), (1, 3, 9.0),
]
instance = build_instance(2, 4, edges, ad_capacity=[2, 2], consumer_capacity=[1, 1, 1, 1])

print("=== serial greedy: scan all edges heaviest-first ===")
greedy, thresholds = solve_serial_greedy(instance)
print(f"matched edges : {sorted(greedy.matched)}")
print(f"total weight  : {greedy.total_weight}")
print(f"feasible      : {verify_feasible(instance, greedy)[0]}")

print("\n=== round-based pour: same matching, two rounds ===")
matching, thresholds, rounds = solve_bsuitor(instance)
print(f"matched edges : {sorted(matching.matched)}")
print(f"pour rounds   : {rounds}   (round 1 pours top-2 each; round 2 repairs the eviction)")
for ad, t in enumerate(thresholds):
    print(f"threshold ad {ad}: weight {t.weight} at consumer {t.consumer}")

print("\n=== pivot solver fed the exact thresholds: zero fine-tuning ===")
matching, _, report = solve_pivot(instance, oracle_predictor)
print(f"matched edges : {sorted(matching.matched)}")
print(f"fine-tune rounds: {report.iterations}")

assert matching.matched == greedy.matched
print("\nall three solvers returned the identical edge set")
