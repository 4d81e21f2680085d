"""
Build once, mine many
=====================

Thresholds are a query-time choice.  A single snapshot of the window is
mined at several support levels; results shrink monotonically and match a
fresh build at every level.
"""

from fractions import Fraction

from fpstream import (LSDS, Batch, FPSTree, MiningRequest, WindowConfig, build_lsds,
                      build_tree, generate_stream, remine)

cfg = WindowConfig(batches_per_window=4, transactions_per_batch=250)
stream = list(generate_stream(sensors=12, count=2000, density=0.3, seed=3))
batches = [Batch(j + 1, tuple(stream[j * 250:(j + 1) * 250])) for j in range(8)]

tree, index = FPSTree(cfg), LSDS(cfg)
for b in batches:
    tree.insert_batch(b)
    index.insert_batch(b)
view, snap = tree.snapshot(), index.snapshot()

for fraction in ("0.2", "0.1", "0.05", "0.02"):
    req = MiningRequest(min_support=Fraction(fraction), threshold_kind="fraction")
    result = remine(view, snap, req)
    largest = max((len(p.pattern) for p in result), default=0)
    print(f"min support {fraction:>5} of window: {len(result):4d} patterns, longest {largest}")

fresh = build_tree(cfg, batches[-4:]).snapshot()
same = remine(fresh, build_lsds(cfg, batches[-4:]).snapshot(), MiningRequest(min_support=50))
print("re-mined == fresh build:", same == remine(view, snap, MiningRequest(min_support=50)))
