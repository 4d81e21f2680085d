"""
High-utility patterns
=====================

Each sensor draws a rated power.  The utility-mode tree accumulates the
power of whole transactions (TWU), which overestimates any pattern's own
power and so safely prunes the search.  Exact utilities then come from the
vertical index.
"""

from fpstream import (LSDS, Batch, EventTransaction, FPSTree, UtilityTable, WindowConfig,
                      hup_candidates, mine_hup)

rows = [("D", "E"), ("A", "C"), ("B", "C", "D"), ("A", "B"),
        ("B", "E"), ("A", "B", "D"), ("A", "B", "C"), ("A", "B", "D", "E")]
stream = [EventTransaction(tid, sensors) for tid, sensors in enumerate(rows, start=1)]
batches = [Batch(j + 1, tuple(stream[2 * j:2 * j + 2])) for j in range(4)]
watts = UtilityTable({"A": 3, "B": 1, "C": 4, "D": 2, "E": 5})

cfg = WindowConfig(2, 2)
tree, index = FPSTree(cfg, "utility"), LSDS(cfg)
for b in batches:
    tree.insert_batch(b, watts)
    index.insert_batch(b)

view = tree.snapshot()
threshold = 12
candidates = hup_candidates(view, threshold)
print(f"{len(candidates)} candidates with TWU >= {threshold}:")
for pattern, twu in sorted(candidates.items(), key=lambda kv: (len(kv[0]), kv[0])):
    print(f"  {'+'.join(pattern):8s} twu={twu}")

result = mine_hup(view, index.snapshot(), watts, threshold)
print(f"\nhigh-utility patterns (utility >= {threshold}):")
print(result.to_jsonl(), end="")
