"""Pattern extraction from the window structures.

Three miners share one result format:

* :func:`mine_frequent` grows patterns from a count-mode tree snapshot by
  recursive projection of conditional pattern bases (FP-growth style);
* :func:`mine_frequent_lsds` walks the vertical index depth first,
  intersecting tid-sets (Eclat style).  It never looks at the tree, so the
  two frequent miners check each other;
* :func:`mine_hup` is two-phase high-utility mining.  Phase I grows every
  pattern whose TWU reaches the threshold from a utility-mode tree; Phase II
  computes exact utilities from the vertical index and drops the rest.

Trees and indexes are only read, so one build serves any number of
threshold changes (:func:`remine`).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import ModeError
from .fpstree import FPSTreeView
from .lsds import _IndexReader
from .model import (
    PatternResult,
    Rational,
    SensorId,
    UtilityTable,
    as_rational,
    pattern_unit_utility,
)

THRESHOLD_KINDS = ("absolute", "fraction")


@dataclass(frozen=True)
class MiningRequest:
    """What to mine and at which threshold.

    With ``threshold_kind="fraction"`` the active threshold is read as a
    fraction of the window total (transaction count for frequent mining,
    summed transaction utility for high-utility mining) and converted to an
    absolute value before mining.
    """

    mode: str = "frequent"
    min_support: Rational = 1
    min_utility: Rational = 0
    threshold_kind: str = "absolute"

    def __post_init__(self):
        if self.mode not in ("frequent", "high-utility"):
            raise ValueError(f"unknown mining mode {self.mode!r}")
        if self.threshold_kind not in THRESHOLD_KINDS:
            raise ValueError(f"unknown threshold kind {self.threshold_kind!r}")
        object.__setattr__(self, "min_support", as_rational(self.min_support))
        object.__setattr__(self, "min_utility", as_rational(self.min_utility))
        if self.threshold_kind == "absolute":
            if self.mode == "frequent" and (
                not isinstance(self.min_support, int) or self.min_support < 1
            ):
                raise ValueError("min_support must be a positive integer")
        elif self.mode == "frequent" and not 0 < self.min_support <= 1:
            raise ValueError("fractional min_support must lie in (0, 1]")
        if self.min_utility < 0:
            raise ValueError("min_utility must be non-negative")


@dataclass(frozen=True)
class MiningResult:
    """Patterns of one window, sorted by (size, canonical order)."""

    window_id: int
    patterns: tuple[PatternResult, ...] = field(default_factory=tuple)

    def __post_init__(self):
        pats = sorted(self.patterns, key=PatternResult.sort_key)
        for a, b in zip(pats, pats[1:]):
            if a.pattern == b.pattern:
                raise ValueError(f"duplicate pattern {a.pattern}")
        object.__setattr__(self, "patterns", tuple(pats))

    def __len__(self):
        return len(self.patterns)

    def __iter__(self) -> Iterator[PatternResult]:
        return iter(self.patterns)

    def as_dict(self) -> dict[tuple[SensorId, ...], tuple[int, Rational]]:
        return {p.pattern: (p.support, p.utility) for p in self.patterns}

    def supports(self) -> dict[tuple[SensorId, ...], int]:
        return {p.pattern: p.support for p in self.patterns}

    def to_jsonl(self) -> str:
        return "".join(p.to_json() + "\n" for p in self.patterns)


# -- pattern growth over a tree snapshot --------------------------------------

def _grow(base, suffix, threshold, out):
    """Mine the conditional pattern base ``base`` (list of (path, weight)).

    Every pattern found is ``item + suffix`` for an item of some path; paths
    are canonically ordered and all their items precede ``suffix``.
    """
    totals: dict[SensorId, Rational] = defaultdict(int)
    for path, w in base:
        for item in path:
            totals[item] += w
    keep = {item for item, w in totals.items() if w >= threshold}
    for item in sorted(keep):
        pattern = (item,) + suffix
        out[pattern] = totals[item]
        cond: dict[tuple, Rational] = defaultdict(int)
        for path, w in base:
            try:
                pos = path.index(item)
            except ValueError:
                continue
            prefix = tuple(p for p in path[:pos] if p in keep)
            if prefix:
                cond[prefix] += w
        if cond:
            _grow(list(cond.items()), pattern, threshold, out)


def grow_patterns(view: FPSTreeView, threshold: Rational) -> dict[tuple[SensorId, ...], Rational]:
    """All patterns whose tree weight is at least ``threshold``, with that weight.

    On a count-mode view the weight is the support; on a utility-mode view it
    is the TWU.
    """
    out: dict[tuple[SensorId, ...], Rational] = {}
    for sensor, nodes in view.header.items():
        total = view.totals[sensor]
        if total < threshold:
            continue
        out[(sensor,)] = total
        cond: dict[tuple, Rational] = defaultdict(int)
        for idx in nodes:
            path = view.prefix_path(idx)
            if path:
                cond[path] += view.weights[idx]
        if cond:
            _grow(list(cond.items()), (sensor,), threshold, out)
    return out


def _check_mode(view: FPSTreeView, expected: str):
    if view.mode != expected:
        raise ModeError(f"expected a {expected}-mode tree, got {view.mode}-mode")


def mine_frequent(
    view: FPSTreeView, min_support: int, utilities: UtilityTable | None = None
) -> MiningResult:
    """Every pattern with support >= ``min_support`` in the snapshot's window.

    Reported utilities use ``utilities`` (unit ratings by default).
    """
    _check_mode(view, "count")
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    u = utilities or UtilityTable.unit()
    found = grow_patterns(view, min_support)
    return MiningResult(
        view.window_id,
        tuple(
            PatternResult(p, int(s), pattern_unit_utility(p, int(s), u), view.window_id)
            for p, s in found.items()
        ),
    )


def _eclat(items, min_support, prefix, out):
    for i, (item, tids) in enumerate(items):
        pattern = prefix + (item,)
        out[pattern] = len(tids)
        ext = []
        for other, otids in items[i + 1:]:
            common = tids & otids
            if len(common) >= min_support:
                ext.append((other, common))
        if ext:
            _eclat(ext, min_support, pattern, out)


def mine_frequent_lsds(
    s: _IndexReader, min_support: int, utilities: UtilityTable | None = None
) -> MiningResult:
    """Same contract as :func:`mine_frequent`, computed by tid-set intersection."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    u = utilities or UtilityTable.unit()
    items = [
        (sensor, frozenset(tids))
        for sensor, tids in sorted(s.index.items())
        if len(tids) >= min_support
    ]
    out: dict[tuple[SensorId, ...], int] = {}
    _eclat(items, min_support, (), out)
    return MiningResult(
        s.window_id,
        tuple(
            PatternResult(p, n, pattern_unit_utility(p, n, u), s.window_id)
            for p, n in out.items()
        ),
    )


# -- high-utility mining --------------------------------------------------------

def hup_candidates(
    view: FPSTreeView, min_utility: Rational
) -> dict[tuple[SensorId, ...], Rational]:
    """Phase I: patterns with TWU >= ``min_utility``, mapped to their TWU.

    Complete for any positive threshold because TWU bounds utility from
    above.  With a zero threshold every co-occurring pattern qualifies, and
    patterns only found in zero-utility transactions leave no trace in the
    tree, so :func:`mine_hup` enumerates those from the index instead.
    """
    _check_mode(view, "utility")
    return grow_patterns(view, min_utility)


def _all_cooccurring(s: _IndexReader) -> Iterable[tuple[SensorId, ...]]:
    out: dict[tuple[SensorId, ...], int] = {}
    items = [(sensor, frozenset(t)) for sensor, t in sorted(s.index.items()) if t]
    _eclat(items, 1, (), out)
    return out


def mine_hup(
    view: FPSTreeView,
    s: _IndexReader,
    utilities: UtilityTable,
    min_utility: Rational,
) -> MiningResult:
    """Patterns whose exact utility is at least ``min_utility``.

    ``view`` must be a utility-mode snapshot of the same window as ``s``.
    """
    _check_mode(view, "utility")
    min_utility = as_rational(min_utility)
    if min_utility < 0:
        raise ValueError("min_utility must be non-negative")
    if min_utility == 0:
        candidates = _all_cooccurring(s)
    else:
        candidates = hup_candidates(view, min_utility)
    kept = []
    for pattern in candidates:
        sup = s.support(pattern)
        if sup == 0:
            continue
        util = pattern_unit_utility(pattern, sup, utilities)
        if util >= min_utility:
            kept.append(PatternResult(pattern, sup, util, view.window_id))
    return MiningResult(view.window_id, tuple(kept))


def absolute_threshold(
    request: MiningRequest, view: FPSTreeView, s: _IndexReader
) -> Rational:
    """The request's active threshold in absolute units for this window."""
    if request.mode == "frequent":
        if request.threshold_kind == "absolute":
            return request.min_support
        return max(1, math.ceil(Fraction(request.min_support) * s.transaction_count()))
    if request.threshold_kind == "absolute":
        return request.min_utility
    return as_rational(Fraction(request.min_utility) * view.total_weight())


def remine(
    view: FPSTreeView,
    s: _IndexReader,
    request: MiningRequest,
    utilities: UtilityTable | None = None,
) -> MiningResult:
    """Mine the existing structures again under ``request``."""
    threshold = absolute_threshold(request, view, s)
    if request.mode == "frequent":
        return mine_frequent(view, threshold, utilities)
    if utilities is None:
        raise ValueError("high-utility mining needs a utility table")
    return mine_hup(view, s, utilities, threshold)
