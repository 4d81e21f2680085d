"""Exhaustive reference miners for small windows.

Nothing here touches the tree or the vertical index: windows are plain lists
of transactions, patterns are enumerated as bitmasks over the sensor
universe, and supports are counted by scanning every transaction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import BoundsExceededError, EmptyPatternError
from .miner import MiningRequest, MiningResult
from .model import EventTransaction, PatternResult, Rational, SensorId, UtilityTable

MAX_TRANSACTIONS = 32
MAX_SENSORS = 16


@dataclass(frozen=True)
class WindowSnapshot:
    transactions: tuple[EventTransaction, ...]
    window_id: int = 0
    sensors: tuple[SensorId, ...] = field(init=False)

    def __post_init__(self):
        txs = tuple(t for t in self.transactions if t.sensors)
        object.__setattr__(self, "transactions", txs)
        object.__setattr__(self, "sensors", tuple(sorted({s for t in txs for s in t.sensors})))


def _eu(u: UtilityTable | None, sensor) -> Rational:
    return 1 if u is None else u[sensor]


def oracle_support(w: WindowSnapshot, pattern: Iterable[SensorId]) -> int:
    pattern = set(pattern)
    if not pattern:
        raise EmptyPatternError("pattern must contain at least one sensor")
    return sum(1 for t in w.transactions if pattern.issubset(t.sensors))


def oracle_twu(w: WindowSnapshot, pattern: Iterable[SensorId], u: UtilityTable) -> Rational:
    pattern = set(pattern)
    if not pattern:
        raise EmptyPatternError("pattern must contain at least one sensor")
    total = 0
    for t in w.transactions:
        if pattern.issubset(t.sensors):
            for s in t.sensors:
                total += u[s]
    return total


def oracle_utility(w: WindowSnapshot, pattern: Iterable[SensorId], u: UtilityTable) -> Rational:
    """Sum over containing transactions of the pattern's ratings."""
    pattern = set(pattern)
    total = 0
    for t in w.transactions:
        if pattern.issubset(t.sensors):
            for s in pattern:
                total += u[s]
    return total


def oracle_table(
    w: WindowSnapshot, u: UtilityTable | None = None
) -> dict[tuple[SensorId, ...], tuple[int, Rational]]:
    """(support, utility) of every non-empty subset of the sensor universe."""
    if len(w.transactions) > MAX_TRANSACTIONS or len(w.sensors) > MAX_SENSORS:
        raise BoundsExceededError(
            f"{len(w.transactions)} transactions / {len(w.sensors)} sensors exceeds "
            f"{MAX_TRANSACTIONS} / {MAX_SENSORS}"
        )
    names = w.sensors
    bit = {s: 1 << i for i, s in enumerate(names)}
    masks = []
    for t in w.transactions:
        m = 0
        for s in t.sensors:
            m |= bit[s]
        masks.append(m)
    eu = [_eu(u, s) for s in names]
    table = {}
    for mask in range(1, 1 << len(names)):
        sup = 0
        for m in masks:
            if m & mask == mask:
                sup += 1
        members = [i for i in range(len(names)) if mask >> i & 1]
        util = 0
        for _ in range(sup):
            for i in members:
                util += eu[i]
        table[tuple(names[i] for i in members)] = (sup, util)
    return table


def oracle_mine(w: WindowSnapshot, request: MiningRequest, u: UtilityTable | None = None) -> MiningResult:
    """Filter :func:`oracle_table` by the request's absolute threshold."""
    if request.threshold_kind != "absolute":
        raise ValueError("the oracle only takes absolute thresholds")
    table = oracle_table(w, u)
    found = []
    for pattern, (sup, util) in table.items():
        if request.mode == "frequent":
            keep = sup >= request.min_support
        else:
            keep = sup >= 1 and util >= request.min_utility
        if keep:
            found.append(PatternResult(pattern, sup, util, w.window_id))
    return MiningResult(w.window_id, tuple(found))
