"""Core domain types: transactions, batches, window settings and utilities.

Every sensor event stream is modelled as a sequence of
:class:`EventTransaction` records, one per time slot, each holding the set of
sensors that were ON during that slot.  Consecutive transactions are grouped
into :class:`Batch` objects and a window is the most recent ``M`` batches.

Utilities are kept exact: sensor power ratings are parsed into
:class:`fractions.Fraction` (integral ratings collapse to plain ``int``) so
that utility sums never suffer from float round-off.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Union

from .errors import MissingUtilityError, RecordError, UtilityTableError

SensorId = str
Rational = Union[int, Fraction]


def validate_sensor_id(token) -> SensorId:
    """Return ``token`` if it is a legal sensor id, else raise ``ValueError``.

    A sensor id is a non-empty string of printable characters containing no
    commas and no whitespace.
    """
    if not isinstance(token, str) or not token:
        raise ValueError(f"sensor id must be a non-empty string, got {token!r}")
    if "," in token or not token.isprintable() or any(c.isspace() for c in token):
        raise ValueError(f"illegal character in sensor id {token!r}")
    return token


def canonical(sensors: Iterable[SensorId]) -> tuple[SensorId, ...]:
    # str ordering is code-point order, which coincides with UTF-8 byte order
    return tuple(sorted(set(sensors)))


def as_rational(value) -> Rational:
    """Convert ``value`` to an exact rational, collapsing integers to ``int``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not utilities")
    if isinstance(value, float):
        # go through repr so 0.1 means one tenth, not the binary neighbour
        value = Fraction(repr(value))
    else:
        value = Fraction(value)
    return int(value) if value.denominator == 1 else value


def format_decimal(value: Rational) -> str:
    """Render an exact rational as a plain decimal literal.

    Values with a terminating decimal expansion are rendered exactly; anything
    else is rounded to 28 significant digits.
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    with localcontext() as ctx:
        ctx.prec = 60 if den == 1 else 28
        text = str(Decimal(value.numerator) / Decimal(value.denominator))
    if "E" in text or "e" in text:
        text = format(Decimal(text), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


@dataclass(frozen=True)
class EventTransaction:
    """The set of sensors that were ON during one time slot.

    ``sensors`` is deduplicated and stored in canonical order regardless of
    the order it was supplied in.
    """

    tid: int
    sensors: tuple[SensorId, ...] = ()

    def __post_init__(self):
        if isinstance(self.tid, bool) or not isinstance(self.tid, int) or self.tid < 1:
            raise ValueError(f"tid must be an integer >= 1, got {self.tid!r}")
        for s in self.sensors:
            validate_sensor_id(s)
        object.__setattr__(self, "sensors", canonical(self.sensors))

    def __len__(self):
        return len(self.sensors)

    def __contains__(self, sensor):
        return sensor in self.sensors

    def to_json(self) -> str:
        return json.dumps({"t": self.tid, "sensors": list(self.sensors)}, separators=(", ", ": "))


@dataclass(frozen=True)
class Batch:
    batch_no: int
    transactions: tuple[EventTransaction, ...]

    def __post_init__(self):
        if self.batch_no < 1:
            raise ValueError(f"batch_no must be >= 1, got {self.batch_no}")
        object.__setattr__(self, "transactions", tuple(self.transactions))
        tids = [t.tid for t in self.transactions]
        if any(a >= b for a, b in zip(tids, tids[1:])):
            raise ValueError("transaction ids within a batch must strictly increase")

    def __len__(self):
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)


@dataclass(frozen=True)
class WindowConfig:
    """Window geometry: ``batches_per_window`` (M) batches of
    ``transactions_per_batch`` time slots each."""

    batches_per_window: int
    transactions_per_batch: int

    def __post_init__(self):
        for name in ("batches_per_window", "transactions_per_batch"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def window_transactions(self) -> int:
        return self.batches_per_window * self.transactions_per_batch


@dataclass(frozen=True)
class UtilityTable:
    """Per-sensor external utility (power rating in watt-units).

    The table built by :meth:`unit` rates every sensor at 1, so that pattern
    utility reduces to ``support * len(pattern)``.
    """

    entries: Mapping[SensorId, Rational] = field(default_factory=dict)
    is_unit: bool = False

    def __post_init__(self):
        clean = {}
        for sensor, value in dict(self.entries).items():
            validate_sensor_id(sensor)
            try:
                value = as_rational(value)
            except (TypeError, ValueError) as exc:
                raise UtilityTableError(f"bad utility for {sensor!r}: {value!r}") from exc
            if value < 0:
                raise UtilityTableError(f"negative utility for {sensor!r}: {value}")
            clean[sensor] = value
        object.__setattr__(self, "entries", clean)

    @classmethod
    def unit(cls) -> "UtilityTable":
        return cls({}, is_unit=True)

    def __getitem__(self, sensor: SensorId) -> Rational:
        if self.is_unit:
            return 1
        try:
            return self.entries[sensor]
        except KeyError:
            raise MissingUtilityError(sensor) from None

    def __contains__(self, sensor):
        return self.is_unit or sensor in self.entries

    def check_covers(self, sensors: Iterable[SensorId]) -> None:
        for s in sensors:
            self[s]


@dataclass(frozen=True, order=True)
class PatternResult:
    """One mined pattern with its window-scoped support and exact utility."""

    pattern: tuple[SensorId, ...]
    support: int
    utility: Rational
    window_id: int

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("pattern must be non-empty")
        object.__setattr__(self, "pattern", canonical(self.pattern))

    def sort_key(self):
        return (len(self.pattern), self.pattern)

    def to_json(self) -> str:
        return (
            f'{{"window": {self.window_id}, "pattern": {json.dumps(list(self.pattern))}, '
            f'"support": {self.support}, "utility": {format_decimal(self.utility)}}}'
        )


def transaction_utility(t: EventTransaction, u: UtilityTable) -> Rational:
    """Sum of the external utilities of the sensors active in ``t``."""
    return sum((u[s] for s in t.sensors), 0)


def pattern_unit_utility(pattern: Iterable[SensorId], support: int, u: UtilityTable) -> Rational:
    """Exact utility of ``pattern`` under the binary ON/OFF event model.

    Each containing transaction contributes the pattern's summed ratings once,
    so the utility is ``support * sum(eu(i) for i in pattern)``.
    """
    if support < 0:
        raise ValueError("support must be non-negative")
    return support * sum((u[s] for s in pattern), 0)


def parse_transaction_line(line: str, lineno: int | None = None) -> EventTransaction:
    """Parse one JSONL event record ``{"t": <int>, "sensors": [...]}``."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(obj, dict):
        raise RecordError("record must be a JSON object", lineno)
    if "t" not in obj or "sensors" not in obj:
        raise RecordError('record needs "t" and "sensors" keys', lineno)
    tid, sensors = obj["t"], obj["sensors"]
    if isinstance(tid, bool) or not isinstance(tid, int) or tid < 1:
        raise RecordError(f'"t" must be an integer >= 1, got {tid!r}', lineno)
    if not isinstance(sensors, list):
        raise RecordError('"sensors" must be a list', lineno)
    try:
        return EventTransaction(tid, tuple(sensors))
    except ValueError as exc:
        raise RecordError(str(exc), lineno) from None


def load_utility_table(path: str | Path) -> UtilityTable:
    """Read a ``sensor,watts`` CSV file into a :class:`UtilityTable`."""
    entries: dict[str, Rational] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["sensor", "watts"]:
            raise UtilityTableError(f"{path}: expected header 'sensor,watts'")
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise UtilityTableError(f"{path}:{rowno}: expected 2 columns")
            sensor, watts = row[0].strip(), row[1].strip()
            if sensor in entries:
                raise UtilityTableError(f"{path}:{rowno}: duplicate sensor {sensor!r}")
            try:
                value = as_rational(Decimal(watts))
            except Exception:
                raise UtilityTableError(f"{path}:{rowno}: bad watts value {watts!r}") from None
            if value < 0:
                raise UtilityTableError(f"{path}:{rowno}: negative watts for {sensor!r}")
            try:
                validate_sensor_id(sensor)
            except ValueError as exc:
                raise UtilityTableError(f"{path}:{rowno}: {exc}") from None
            entries[sensor] = value
    return UtilityTable(entries)
