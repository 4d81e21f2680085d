"""
Sliding the window
==================

When a batch arrives at a full window, every counter array shifts one slot
to the left and nodes left with all-zero counters disappear.  The slid
tree is identical to one built from scratch on the retained batches.
"""

from fpstream import LSDS, Batch, EventTransaction, FPSTree, WindowConfig, build_tree

rows = [("D", "E"), ("A", "C"), ("B", "C", "D"), ("A", "B"),
        ("B", "E"), ("A", "B", "D"), ("A", "B", "C"), ("A", "B", "D", "E")]
stream = [EventTransaction(tid, sensors) for tid, sensors in enumerate(rows, start=1)]
batches = [Batch(j + 1, tuple(stream[2 * j:2 * j + 2])) for j in range(4)]

cfg = WindowConfig(2, 2)
tree, index = FPSTree(cfg), LSDS(cfg)
for b in batches:
    tree.insert_batch(b)
    index.insert_batch(b)
    print(f"after batch {b.batch_no}: window starts at batch {tree.window_id}, "
          f"{tree.node_count()} nodes")
    print(tree.dump())

fresh = build_tree(cfg, batches[-2:])
print("identical to a fresh build on the last two batches:", fresh.dump() == tree.dump())
print("index after sliding:")
print(index.dump())
