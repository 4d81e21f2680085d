"""Linked Sensor Data Stream: a window-bounded vertical index.

For every sensor the LSDS keeps the ascending list of transaction ids in
which that sensor was ON.  OFF readings are never stored, so the index holds
exactly one entry per active (sensor, time slot) cell of the binary event
matrix.  Batches enter at the new end of the window and leave from the old
end; a batch that would overflow the window first evicts the oldest one.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import BatchOrderError, BatchSizeError, EmptyLSDSError, EmptyPatternError
from .model import Batch, EventTransaction, SensorId, WindowConfig


class _IndexReader:
    """Read-only queries shared by the live index and its snapshots.

    Subclasses provide ``index`` (sensor -> ascending tid sequence),
    ``transactions`` (tid -> EventTransaction) and ``window_id``.
    """

    index: Mapping[SensorId, "list[int] | tuple[int, ...]"]
    transactions: Mapping[int, EventTransaction]

    def tidset(self, sensor: SensorId) -> frozenset[int]:
        return frozenset(self.index.get(sensor, ()))

    def events_at_time(self, tid: int) -> set[SensorId]:
        """Sensors that were ON at ``tid``; empty if ``tid`` is not retained."""
        if tid is None:
            return set()
        found = set()
        for sensor, tids in self.index.items():
            pos = bisect_right(tids, tid)
            if pos and tids[pos - 1] == tid:
                found.add(sensor)
        return found

    def co_occurrence(self, pattern: Iterable[SensorId]) -> set[int]:
        """Transaction ids in which every sensor of ``pattern`` is ON."""
        pattern = set(pattern)
        if not pattern:
            raise EmptyPatternError("pattern must contain at least one sensor")
        lists = []
        for sensor in pattern:
            tids = self.index.get(sensor)
            if not tids:
                return set()
            lists.append(tids)
        lists.sort(key=len)
        result = set(lists[0])
        for tids in lists[1:]:
            result.intersection_update(tids)
            if not result:
                break
        return result

    def support(self, pattern: Iterable[SensorId]) -> int:
        return len(self.co_occurrence(pattern))

    def sensors(self) -> list[SensorId]:
        return sorted(self.index)

    def transaction_count(self) -> int:
        """Number of retained non-empty transactions."""
        return len(self.transactions)

    def cell_count(self) -> int:
        """Total stored occurrence entries (one per ON cell)."""
        return sum(len(t) for t in self.index.values())

    def window_transactions(self) -> list[EventTransaction]:
        return [self.transactions[tid] for tid in sorted(self.transactions)]

    def dump(self) -> str:
        """One ``sensor: tid,tid,...`` line per sensor in canonical order."""
        return "".join(
            f"{s}: {','.join(map(str, self.index[s]))}\n" for s in sorted(self.index)
        )


class LSDS(_IndexReader):
    """Mutable vertical index over the most recent ``M`` batches.

    >>> from fpstream.model import WindowConfig, Batch, EventTransaction as T
    >>> s = LSDS(WindowConfig(2, 2))
    >>> s.insert_batch(Batch(1, [T(1, ("D", "E")), T(2, ("A", "C"))]))
    >>> print(s.dump(), end="")
    A: 2
    C: 2
    D: 1
    E: 1
    """

    def __init__(self, window_cfg: WindowConfig):
        self.window_cfg = window_cfg
        # (batch_no, indexed tids of the batch, sensors touched by the batch)
        self._batches: deque[tuple[int, tuple[int, ...], frozenset[SensorId]]] = deque()
        self.index: dict[SensorId, list[int]] = {}
        self.transactions: dict[int, EventTransaction] = {}
        self._last_batch_no = 0
        self._last_tid = 0
        self._closed = False

    @property
    def batches(self) -> list[int]:
        return [b[0] for b in self._batches]

    @property
    def window_id(self) -> int:
        """Batch number of the oldest retained batch (0 before any input)."""
        return self._batches[0][0] if self._batches else self._last_batch_no

    def __len__(self):
        return len(self._batches)

    def insert_batch(self, batch: Batch) -> None:
        """Index ``batch``, evicting the oldest batch first if the window is full.

        A batch shorter than the configured size is accepted once, as the
        tail of the stream; nothing may be inserted after it.
        """
        cfg = self.window_cfg
        if self._closed:
            raise BatchOrderError("stream already ended with a partial batch")
        if batch.batch_no != self._last_batch_no + 1:
            raise BatchOrderError(
                f"expected batch {self._last_batch_no + 1}, got {batch.batch_no}"
            )
        if len(batch) > cfg.transactions_per_batch:
            raise BatchSizeError(
                f"batch {batch.batch_no} has {len(batch)} transactions, "
                f"limit is {cfg.transactions_per_batch}"
            )
        if batch.transactions and batch.transactions[0].tid <= self._last_tid:
            raise BatchOrderError(f"tid {batch.transactions[0].tid} is not increasing")
        if len(self._batches) >= cfg.batches_per_window:
            self.delete_oldest()

        touched = set()
        kept = []
        for t in batch.transactions:
            if not t.sensors:
                continue
            kept.append(t.tid)
            self.transactions[t.tid] = t
            for s in t.sensors:
                self.index.setdefault(s, []).append(t.tid)
            touched.update(t.sensors)
        self._batches.append((batch.batch_no, tuple(kept), frozenset(touched)))
        self._last_batch_no = batch.batch_no
        if batch.transactions:
            self._last_tid = batch.transactions[-1].tid
        if len(batch) < cfg.transactions_per_batch:
            self._closed = True

    def delete_oldest(self) -> None:
        """Drop every index entry that belongs to the oldest retained batch."""
        if not self._batches:
            raise EmptyLSDSError("no batch to delete")
        _, tids_out, touched = self._batches.popleft()
        if not tids_out:
            return
        last_tid = tids_out[-1]
        for s in touched:
            tids = self.index[s]
            cut = bisect_right(tids, last_tid)
            if cut == len(tids):
                del self.index[s]
            else:
                del tids[:cut]
        for tid in tids_out:
            del self.transactions[tid]

    def snapshot(self) -> "LSDSView":
        return LSDSView(
            index=MappingProxyType({s: tuple(t) for s, t in self.index.items()}),
            transactions=MappingProxyType(dict(self.transactions)),
            window_id=self.window_id,
        )


@dataclass(frozen=True, eq=False)
class LSDSView(_IndexReader):
    """Immutable copy of an :class:`LSDS` taken between batch insertions."""

    index: Mapping[SensorId, tuple[int, ...]]
    transactions: Mapping[int, EventTransaction]
    window_id: int

    def __eq__(self, other):
        if not isinstance(other, LSDSView):
            return NotImplemented
        return (
            dict(self.index) == dict(other.index)
            and dict(self.transactions) == dict(other.transactions)
            and self.window_id == other.window_id
        )

    __hash__ = None


def build_lsds(window_cfg: WindowConfig, batches: Iterable[Batch]) -> LSDS:
    """Fresh index over ``batches`` (at most the last ``M`` are retained)."""
    s = LSDS(window_cfg)
    batches = list(batches)
    if batches:
        # start numbering where the given batches start
        s._last_batch_no = batches[0].batch_no - 1
    for b in batches:
        s.insert_batch(b)
    return s


def lsds_insert_batch(s: LSDS, b: Batch) -> None:
    s.insert_batch(b)


def lsds_delete_oldest(s: LSDS) -> None:
    s.delete_oldest()


def events_at_time(s: _IndexReader, tid: int) -> set[SensorId]:
    return s.events_at_time(tid)


def co_occurrence(s: _IndexReader, pattern: Iterable[SensorId]) -> set[int]:
    return s.co_occurrence(pattern)


def support(s: _IndexReader, pattern: Iterable[SensorId]) -> int:
    return s.support(pattern)
