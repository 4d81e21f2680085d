"""Seeded synthetic sensor streams for tests and benchmarks."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .model import EventTransaction

_CHUNK = 8192


def sensor_names(n: int) -> list[str]:
    """``S1..Sn`` zero-padded so that canonical order matches numeric order."""
    width = len(str(n))
    return [f"S{i:0{width}d}" for i in range(1, n + 1)]


def generate_stream(sensors: int, count: int, density: float, seed: int) -> Iterator[EventTransaction]:
    """Yield ``count`` transactions; each sensor is ON independently with
    probability ``density``.  Identical arguments give identical streams."""
    if sensors < 1:
        raise ValueError("sensors must be >= 1")
    if count < 0:
        raise ValueError("count must be >= 0")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    names = np.array(sensor_names(sensors), dtype=object)
    rng = np.random.default_rng(seed)
    tid = 0
    for start in range(0, count, _CHUNK):
        on = rng.random((min(_CHUNK, count - start), sensors)) < density
        for row in on:
            tid += 1
            yield EventTransaction(tid, tuple(names[row]))
