"""FPS-tree: a prefix tree with per-batch counter arrays for sliding windows.

Each transaction is inserted as a root-to-leaf path over its sensors in
canonical order.  Every node owns a counter array with one slot per batch of
the window; inserting a transaction adds its weight to the current batch's
slot of every node on the path.  Sliding the window shifts every counter
array left by one slot and removes nodes whose arrays became all zero.

Two weight modes share one implementation:

``"count"``
    every transaction adds 1, so node counters are supports;
``"utility"``
    every transaction adds its transaction utility, so header totals are
    transaction-weighted utilities (TWU).

Counters live in one slot-major numpy array with a column per node.  The
left shift is a rotation of the slot origin plus zeroing of the vacated
slot, and only nodes that held weight in the outgoing slot are examined for
pruning, so a slide costs little more than the batch it retires.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from .errors import EmptyTransactionError
from .model import (
    Batch,
    EventTransaction,
    Rational,
    SensorId,
    UtilityTable,
    WindowConfig,
    as_rational,
    format_decimal,
    transaction_utility,
)

MODES = ("count", "utility")


class FPSNode:
    """A tree node.

    Only the sensor, the children and the node's storage row live on the
    object.  Counters, the parent and the header-chain successor are read
    from the owning tree's row arrays, so removing a subtree never has to
    touch more than its root.
    """

    __slots__ = ("sensor", "children", "row", "_tree")

    def __init__(self, sensor, tree, row=None):
        self.sensor: Optional[SensorId] = sensor
        self.children: dict[SensorId, FPSNode] = {}
        self.row: Optional[int] = row
        self._tree = tree

    @property
    def counters(self) -> tuple:
        if self.row is None:
            return ()
        return self._tree._row_counters(self.row)

    @property
    def parent(self) -> Optional["FPSNode"]:
        if self.row is None:
            return None
        return self._tree._parent_of(self.row)

    @property
    def node_link(self) -> Optional["FPSNode"]:
        """Next node with the same sensor in the header chain."""
        if self.row is None:
            return None
        chain = self._tree._chain_rows(self.sensor)
        pos = chain.index(self.row)
        return self._tree._nodes[chain[pos + 1]] if pos + 1 < len(chain) else None

    def __repr__(self):
        return f"FPSNode({self.sensor!r}, {list(self.counters)})"


class FPSTree:
    """Sliding-window prefix tree.

    Parameters
    ----------
    window_cfg : WindowConfig
        ``batches_per_window`` fixes the length of every counter array.
    mode : {"count", "utility"}
        Weight semantics, see the module docstring.
    """

    def __init__(self, window_cfg: WindowConfig, mode: str = "count"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.window_cfg = window_cfg
        self.mode = mode
        self._m = window_cfg.batches_per_window
        self._dtype = np.int64 if mode == "count" else object
        cap = 64
        # per-row storage; a row is live iff _alive[row].  _slots[k] holds
        # logical slot (k - _base) % M.
        self._slots = self._zeros(cap)
        self._base = 0
        self._rowsum = np.zeros(cap, dtype=self._dtype)
        if self._dtype is object:
            self._rowsum[...] = 0
        self._alive = np.zeros(cap, dtype=bool)
        self._codes = np.zeros(cap, dtype=np.int64)
        self._parent_rows = np.full(cap, -1, dtype=np.int64)
        self._serial = np.zeros(cap, dtype=np.int64)
        self._nodes: list[Optional[FPSNode]] = [None] * cap
        self._free = list(range(cap - 1, -1, -1))
        self._code_of: dict[SensorId, int] = {}
        self._sensor_of: list[SensorId] = []
        self._next_serial = 0
        # buffered writes, applied by _flush
        self._pending_rows: list[int] = []
        self._pending_w: list = []
        self._new_rows: list[int] = []
        self._new_codes: list[int] = []
        self._new_parents: list[int] = []

        self.root = FPSNode(None, self)
        self._totals: dict[SensorId, Rational] = {}
        self.current_slot = 0
        self._occupied = 0
        self._batches_seen = 0

    # -- storage -------------------------------------------------------

    def _zeros(self, n):
        a = np.zeros((self._m, n), dtype=self._dtype)
        if self._dtype is object:
            a[...] = 0
        return a

    def _grow(self):
        old = len(self._nodes)
        new = old * 2
        slots = self._zeros(new)
        slots[:, :old] = self._slots
        self._slots = slots
        rowsum = np.zeros(new, dtype=self._dtype)
        if self._dtype is object:
            rowsum[...] = 0
        rowsum[:old] = self._rowsum
        self._rowsum = rowsum
        self._alive = np.concatenate([self._alive, np.zeros(old, dtype=bool)])
        self._codes = np.concatenate([self._codes, np.zeros(old, dtype=np.int64)])
        self._parent_rows = np.concatenate([self._parent_rows, np.full(old, -1, dtype=np.int64)])
        self._serial = np.concatenate([self._serial, np.zeros(old, dtype=np.int64)])
        self._nodes.extend([None] * old)
        self._free.extend(range(new - 1, old - 1, -1))

    def _flush(self):
        if self._new_rows:
            rows = np.asarray(self._new_rows, dtype=np.intp)
            self._alive[rows] = True
            self._codes[rows] = self._new_codes
            self._parent_rows[rows] = self._new_parents
            n = len(rows)
            self._serial[rows] = np.arange(self._next_serial, self._next_serial + n)
            self._next_serial += n
            self._new_rows, self._new_codes, self._new_parents = [], [], []
        if self._pending_rows:
            rows = np.asarray(self._pending_rows, dtype=np.intp)
            w = np.asarray(self._pending_w, dtype=self._dtype)
            np.add.at(self._slots, (self._phys(self.current_slot), rows), w)
            np.add.at(self._rowsum, rows, w)
            self._pending_rows, self._pending_w = [], []

    def _phys(self, slot: int) -> int:
        return (self._base + slot) % self._m

    def _ordered(self) -> np.ndarray:
        """Counters as a (rows, M) array in logical slot order."""
        order = (self._base + np.arange(self._m)) % self._m
        return self._slots[order].T

    def _row_counters(self, row) -> tuple:
        self._flush()
        order = (self._base + np.arange(self._m)) % self._m
        return tuple(self._slots[order, row].tolist())

    def _parent_of(self, row) -> FPSNode:
        self._flush()
        p = int(self._parent_rows[row])
        return self.root if p < 0 else self._nodes[p]

    def _chain_rows(self, sensor) -> list[int]:
        """Live rows holding ``sensor``, in node creation order."""
        self._flush()
        code = self._code_of.get(sensor)
        if code is None:
            return []
        rows = np.flatnonzero(self._alive & (self._codes == code))
        return rows[np.argsort(self._serial[rows], kind="stable")].tolist()

    def _new_node(self, sensor, parent: FPSNode) -> FPSNode:
        if not self._free:
            self._grow()
        row = self._free.pop()
        node = FPSNode(sensor, self, row)
        parent.children[sensor] = node
        self._nodes[row] = node
        code = self._code_of.get(sensor)
        if code is None:
            code = self._code_of[sensor] = len(self._sensor_of)
            self._sensor_of.append(sensor)
        self._new_rows.append(row)
        self._new_codes.append(code)
        self._new_parents.append(-1 if parent.row is None else parent.row)
        return node

    # -- public operations ---------------------------------------------

    @property
    def occupied_slots(self) -> int:
        return self._occupied

    @property
    def window_id(self) -> int:
        """Number of the oldest batch that still has a slot in the window."""
        if self._occupied == 0:
            return self._batches_seen
        return self._batches_seen - self._occupied + 1

    def begin_batch(self) -> None:
        """Open the next batch slot, sliding first if all ``M`` slots are used."""
        self._flush()
        if self._occupied >= self._m:
            self.slide_window()
        self.current_slot = self._occupied
        self._occupied += 1
        self._batches_seen += 1

    def insert_transaction(self, t: EventTransaction, weight: Rational | None = None) -> None:
        """Add ``t`` as a path, crediting ``weight`` to the current slot.

        In count mode the weight is always 1.  In utility mode the caller
        passes the transaction utility; a zero weight leaves the tree
        unchanged, since a node with all-zero counters carries nothing.
        """
        if not t.sensors:
            raise EmptyTransactionError(f"transaction {t.tid} has no active sensors")
        if self.mode == "count":
            if weight not in (None, 1):
                raise ValueError("count-mode trees only accept weight 1")
            weight = 1
        else:
            if weight is None:
                raise ValueError("utility-mode trees need an explicit weight")
            weight = as_rational(weight)
            if weight < 0:
                raise ValueError(f"weight must be non-negative, got {weight}")
            if weight == 0:
                return
        if self._occupied == 0:
            self.begin_batch()

        node = self.root
        rows = self._pending_rows
        totals = self._totals
        for s in t.sensors:
            child = node.children.get(s)
            if child is None:
                child = self._new_node(s, node)
            rows.append(child.row)
            totals[s] = totals.get(s, 0) + weight
            node = child
        self._pending_w.extend([weight] * len(t.sensors))

    def insert_batch(self, batch: Batch, utilities: UtilityTable | None = None) -> None:
        """Open a slot for ``batch`` and insert its non-empty transactions."""
        self.begin_batch()
        for t in batch.transactions:
            if not t.sensors:
                continue
            if self.mode == "count":
                self.insert_transaction(t)
            else:
                self.insert_transaction(t, transaction_utility(t, utilities))

    def slide_window(self) -> None:
        """Shift every counter array left one slot and prune all-zero nodes."""
        self._flush()
        if self._occupied:
            self._occupied -= 1
        self.current_slot = max(self._occupied - 1, 0)
        if not self.root.children:
            return
        alive = self._alive
        out_slot = self._phys(0)
        outgoing = self._slots[out_slot]
        leaving = np.flatnonzero(outgoing)
        out_w = outgoing[leaving]
        outgoing[leaving] = 0
        self._base = (self._base + 1) % self._m

        if self.mode == "count":
            delta = np.bincount(self._codes[leaving], weights=out_w)
            for code in np.flatnonzero(delta).tolist():
                self._totals[self._sensor_of[code]] -= int(delta[code])
        else:
            for row, w in zip(leaving.tolist(), out_w.tolist()):
                self._totals[self._nodes[row].sensor] -= w
        self._rowsum[leaving] -= out_w

        dead = np.zeros(len(alive), dtype=bool)
        dead[leaving[self._rowsum[leaving] == 0]] = True
        dead_rows = np.flatnonzero(dead)
        if dead_rows.size:
            parents = self._parent_rows
            # a child's slot values never exceed its parent's, so a dead
            # parent implies dead children
            survivors = np.flatnonzero(alive & ~dead)
            sp = parents[survivors]
            assert not dead[sp[sp >= 0]].any()
            dp = parents[dead_rows]
            top = (dp < 0) | ~dead[np.maximum(dp, 0)]
            nodes = self._nodes
            for row, p in zip(dead_rows[top].tolist(), dp[top].tolist()):
                owner = self.root if p < 0 else nodes[p]
                del owner.children[nodes[row].sensor]
            rows = dead_rows.tolist()
            for row in rows:
                nodes[row] = None
            self._free.extend(rows)
            alive[dead_rows] = False
            parents[dead_rows] = -1
        for s in [s for s, total in self._totals.items() if total == 0]:
            del self._totals[s]

    def header_total(self, sensor: SensorId) -> Rational:
        """Window-wide weight of ``sensor``: its support in count mode, its
        TWU in utility mode, 0 if absent."""
        return self._totals.get(sensor, 0)

    @property
    def header(self) -> Mapping[SensorId, tuple[Rational, FPSNode]]:
        """Sensor -> (total weight, first node of its chain)."""
        return MappingProxyType(
            {s: (self._totals[s], self._nodes[self._chain_rows(s)[0]]) for s in sorted(self._totals)}
        )

    def chain(self, sensor: SensorId) -> Iterator[FPSNode]:
        for row in self._chain_rows(sensor):
            yield self._nodes[row]

    def nodes(self) -> Iterator[FPSNode]:
        """All non-root nodes, pre-order, children in canonical order."""
        stack = [self.root.children[s] for s in sorted(self.root.children, reverse=True)]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children[s] for s in sorted(node.children, reverse=True))

    def node_count(self) -> int:
        self._flush()
        return int(self._alive.sum())

    def snapshot(self) -> "FPSTreeView":
        self._flush()
        ordered = self._ordered()
        sums = self._rowsum
        sensors, parents, weights, counters, depths = [], [], [], [], []
        header: dict[SensorId, list[int]] = {}
        stack = [(self.root.children[s], -1, 1) for s in sorted(self.root.children, reverse=True)]
        while stack:
            node, parent, depth = stack.pop()
            idx = len(sensors)
            sensors.append(node.sensor)
            parents.append(parent)
            w = sums[node.row]
            weights.append(int(w) if self.mode == "count" else as_rational(w))
            counters.append(tuple(ordered[node.row].tolist()))
            depths.append(depth)
            header.setdefault(node.sensor, []).append(idx)
            stack.extend(
                (node.children[s], idx, depth + 1)
                for s in sorted(node.children, reverse=True)
            )
        return FPSTreeView(
            mode=self.mode,
            batches_per_window=self._m,
            window_id=self.window_id,
            sensors=tuple(sensors),
            parents=tuple(parents),
            weights=tuple(weights),
            counters=tuple(counters),
            depths=tuple(depths),
            header=MappingProxyType({s: tuple(v) for s, v in sorted(header.items())}),
            totals=MappingProxyType(dict(sorted(self._totals.items()))),
        )

    def dump(self) -> str:
        return self.snapshot().dump()

    def check_invariants(self) -> None:
        """Recompute header totals and structural properties by full traversal.

        Raises ``AssertionError`` on the first inconsistency.
        """
        self._flush()
        ordered = self._ordered()
        recomputed: dict[SensorId, Rational] = {}
        seen = 0
        for node in self.nodes():
            seen += 1
            c = ordered[node.row].tolist()
            assert self._alive[node.row] and self._nodes[node.row] is node
            assert len(c) == self._m
            assert all(v >= 0 for v in c), node
            assert any(v != 0 for v in c), node
            parent = node.parent
            assert parent.children[node.sensor] is node
            if parent is not self.root:
                assert parent.sensor < node.sensor, (parent, node)
                pc = ordered[parent.row].tolist()
                assert all(a <= b for a, b in zip(c, pc)), (node, parent)
            assert self._rowsum[node.row] == sum(c)
            recomputed[node.sensor] = recomputed.get(node.sensor, 0) + as_rational(sum(c))
        assert seen == self.node_count()
        assert recomputed == self._totals, (recomputed, self._totals)
        for s in recomputed:
            chained = list(self.chain(s))
            assert sorted(id(n) for n in chained) == sorted(
                id(n) for n in self.nodes() if n.sensor == s
            )


@dataclass(frozen=True, eq=False)
class FPSTreeView:
    """Immutable pre-order copy of an :class:`FPSTree`.

    Node ``i`` has sensor ``sensors[i]``, parent index ``parents[i]`` (-1 for
    children of the root), window weight ``weights[i]`` (sum of its counter
    array) and per-slot ``counters[i]``.  ``header`` maps each sensor to the
    indices of its nodes.
    """

    mode: str
    batches_per_window: int
    window_id: int
    sensors: tuple[SensorId, ...]
    parents: tuple[int, ...]
    weights: tuple
    counters: tuple[tuple, ...]
    depths: tuple[int, ...]
    header: Mapping[SensorId, tuple[int, ...]]
    totals: Mapping[SensorId, Rational]

    def __eq__(self, other):
        if not isinstance(other, FPSTreeView):
            return NotImplemented
        return self.mode == other.mode and self.window_id == other.window_id and (
            self.dump() == other.dump()
        )

    __hash__ = None

    def __len__(self):
        return len(self.sensors)

    def prefix_path(self, idx: int) -> tuple[SensorId, ...]:
        """Sensors strictly above node ``idx``, root side first."""
        path = []
        p = self.parents[idx]
        while p >= 0:
            path.append(self.sensors[p])
            p = self.parents[p]
        path.reverse()
        return tuple(path)

    def header_total(self, sensor: SensorId) -> Rational:
        return self.totals.get(sensor, 0)

    def total_weight(self) -> Rational:
        """Sum of transaction weights in the window (each transaction passes
        through exactly one child of the root)."""
        return sum((w for w, p in zip(self.weights, self.parents) if p < 0), 0)

    def dump(self) -> str:
        """Pre-order lines ``depth sensor [c0,...,cM-1]``."""
        return "".join(
            f"{d} {s} [{','.join(format_decimal(v) for v in c)}]\n"
            for d, s, c in zip(self.depths, self.sensors, self.counters)
        )


def build_tree(
    window_cfg: WindowConfig,
    batches: Iterable[Batch],
    mode: str = "count",
    utilities: UtilityTable | None = None,
) -> FPSTree:
    """Fresh tree whose slots hold ``batches`` oldest first (the last ``M`` are kept)."""
    tree = FPSTree(window_cfg, mode)
    batches = list(batches)
    if batches:
        tree._batches_seen = batches[0].batch_no - 1
    for b in batches:
        tree.insert_batch(b, utilities)
    return tree


def insert_transaction(tree: FPSTree, t: EventTransaction, weight: Rational | None = None) -> None:
    tree.insert_transaction(t, weight)


def begin_batch(tree: FPSTree) -> None:
    tree.begin_batch()


def slide_window(tree: FPSTree) -> None:
    tree.slide_window()


def header_total(tree: FPSTree, sensor: SensorId) -> Rational:
    return tree.header_total(sensor)


def snapshot(tree: FPSTree) -> FPSTreeView:
    return tree.snapshot()
