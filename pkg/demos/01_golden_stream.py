"""
Indexing a small sensor stream
==============================

Eight time slots from a five-sensor home, grouped in batches of two.  We
build the vertical index and the prefix tree over the first window and
look at what each one stores.
"""

from fpstream import LSDS, Batch, EventTransaction, FPSTree, WindowConfig

rows = [("D", "E"), ("A", "C"), ("B", "C", "D"), ("A", "B"),
        ("B", "E"), ("A", "B", "D"), ("A", "B", "C"), ("A", "B", "D", "E")]
stream = [EventTransaction(tid, sensors) for tid, sensors in enumerate(rows, start=1)]
batches = [Batch(j + 1, tuple(stream[2 * j:2 * j + 2])) for j in range(4)]

cfg = WindowConfig(batches_per_window=2, transactions_per_batch=2)
index = LSDS(cfg)
tree = FPSTree(cfg)
for b in batches[:2]:
    index.insert_batch(b)
    tree.insert_batch(b)

# Only ON readings are stored: one tid per active cell.
print("vertical index, first window")
print(index.dump())
print(f"{index.cell_count()} cells instead of {5 * 4} in the dense matrix\n")

# Each node keeps one counter per batch slot.
print("prefix tree, first window (depth sensor [slot0,slot1])")
print(tree.dump())

# Point lookup and co-occurrence, straight from the index.
print("sensors ON at T3:", sorted(index.events_at_time(3)))
print("slots where D fired:", sorted(index.co_occurrence({"D"})))
print("support of {B}:", index.support({"B"}), "=", tree.header_total("B"))
