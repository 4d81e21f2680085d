"""Batch a transaction stream into the window structures and mine each window."""

from __future__ import annotations

from typing import Iterable, Iterator

from .fpstree import FPSTree
from .lsds import LSDS
from .miner import MiningRequest, MiningResult, remine
from .model import Batch, EventTransaction, UtilityTable, WindowConfig


class WindowMiner:
    """Feed transactions one at a time; get a result whenever a batch closes a
    full window.

    The vertical index and the tree are updated in lock step: one batch in,
    and once ``M`` batches are retained, the oldest batch out.
    """

    def __init__(
        self,
        window_cfg: WindowConfig,
        request: MiningRequest,
        utilities: UtilityTable | None = None,
    ):
        if request.mode == "high-utility" and utilities is None:
            raise ValueError("high-utility mining needs a utility table")
        self.window_cfg = window_cfg
        self.request = request
        self.utilities = utilities
        self.lsds = LSDS(window_cfg)
        self.tree = FPSTree(window_cfg, "count" if request.mode == "frequent" else "utility")
        self._pending: list[EventTransaction] = []
        self._batch_no = 0
        self._last_tid = 0

    @property
    def batches_completed(self) -> int:
        return self._batch_no

    def push(self, t: EventTransaction) -> MiningResult | None:
        if t.tid <= self._last_tid:
            raise ValueError(f"tid {t.tid} does not follow {self._last_tid}")
        if self.request.mode == "high-utility":
            self.utilities.check_covers(t.sensors)
        self._last_tid = t.tid
        self._pending.append(t)
        if len(self._pending) < self.window_cfg.transactions_per_batch:
            return None
        return self._close_batch()

    def _close_batch(self) -> MiningResult | None:
        self._batch_no += 1
        batch = Batch(self._batch_no, tuple(self._pending))
        self._pending = []
        self.lsds.insert_batch(batch)
        self.tree.insert_batch(batch, self.utilities)
        if len(self.lsds) < self.window_cfg.batches_per_window:
            return None
        return self.mine()

    def mine(self, request: MiningRequest | None = None) -> MiningResult:
        """Mine the current window, optionally under a different request."""
        return remine(
            self.tree.snapshot(), self.lsds.snapshot(), request or self.request, self.utilities
        )

    def run(self, transactions: Iterable[EventTransaction]) -> Iterator[MiningResult]:
        for t in transactions:
            result = self.push(t)
            if result is not None:
                yield result
