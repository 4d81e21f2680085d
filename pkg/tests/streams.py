"""Seeded random fixtures shared by the property and acceptance tests."""

import random
from fractions import Fraction

from fpstream import Batch, EventTransaction, UtilityTable, WindowConfig

SENSORS = "ABCDEFGHIJ"


def random_stream(seed, max_sensors=10, max_transactions=32):
    """(WindowConfig, batches, utility table) drawn from ``seed``."""
    rng = random.Random(seed)
    n_sensors = rng.randint(1, max_sensors)
    names = SENSORS[:n_sensors]
    n = rng.randint(0, max_transactions)
    density = rng.choice([0.15, 0.3, 0.5, 0.8])
    size = rng.randint(1, 4)
    m = rng.choice([1, 2, 3])
    tid = 0
    txs = []
    for _ in range(n):
        tid += rng.randint(1, 3)
        txs.append(EventTransaction(tid, tuple(s for s in names if rng.random() < density)))
    batches = [
        Batch(j + 1, tuple(txs[k:k + size]))
        for j, k in enumerate(range(0, n - n % size, size))
    ]
    watts = {}
    for s in names:
        kind = rng.random()
        if kind < 0.1:
            watts[s] = 0
        elif kind < 0.3:
            watts[s] = Fraction(rng.randint(1, 40), 4)
        else:
            watts[s] = rng.randint(1, 9)
    return WindowConfig(m, size), batches, UtilityTable(watts)


def window_of(batches, upto, m):
    """Batches retained after inserting ``batches[:upto]`` into an M-window."""
    return batches[max(0, upto - m):upto]
