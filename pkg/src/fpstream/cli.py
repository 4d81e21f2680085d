"""Command-line front end.

Subcommands::

    fpstream mine     --input events.jsonl --batch-size 2 --window-batches 2 --min-support 2
    fpstream stream   < events.jsonl        (same reports, emitted as batches close)
    fpstream anomaly  --utility-table watts.csv --budget 20 --input events.jsonl
    fpstream gen      --sensors 50 --count 100000 --density 0.1 --seed 7

Reports go to standard output as JSONL, diagnostics to standard error.
Exit status is 0 on success, 1 on malformed input or configuration, and 2
when a sensor has no utility entry.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, InvalidOperation
from typing import IO, Iterator, Sequence

from .engine import WindowMiner
from .errors import MissingUtilityError, RecordError, UtilityTableError
from .miner import MiningRequest
from .model import (
    EventTransaction,
    WindowConfig,
    as_rational,
    format_decimal,
    load_utility_table,
    parse_transaction_line,
)
from .synth import generate_stream

EXIT_OK, EXIT_INPUT, EXIT_UTILITY = 0, 1, 2


class ConfigError(ValueError):
    pass


def _decimal(text):
    try:
        value = as_rational(Decimal(text))
    except (InvalidOperation, ValueError, OverflowError):
        raise argparse.ArgumentTypeError(f"not a decimal: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _open_input(path, stdin):
    if path in (None, "-"):
        return stdin, False
    return open(path, encoding="utf-8"), True


def _build_miner(args) -> WindowMiner:
    cfg = WindowConfig(args.window_batches, args.batch_size)
    table = None
    if args.utility_table:
        try:
            table = load_utility_table(args.utility_table)
        except OSError as exc:
            raise ConfigError(f"cannot read utility table: {exc}") from None
        except UtilityTableError as exc:
            raise ConfigError(str(exc)) from None
    if args.mode == "hup":
        if table is None:
            raise ConfigError("--utility-table is required with --mode hup")
        request = MiningRequest("high-utility", min_utility=args.min_utility)
    else:
        request = MiningRequest("frequent", min_support=args.min_support)
    return WindowMiner(cfg, request, table)


def _strict_records(fh) -> Iterator[EventTransaction]:
    for lineno, line in enumerate(fh, start=1):
        if line.strip():
            yield lineno, parse_transaction_line(line, lineno)


def _lenient_records(fh, stderr) -> Iterator[EventTransaction]:
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            yield lineno, parse_transaction_line(line, lineno)
        except RecordError as exc:
            print(f"fpstream: skipped {exc}", file=stderr)


def _drive(args, records, emit, stdout, stderr, lenient=False) -> int:
    try:
        miner = _build_miner(args)
    except (ConfigError, ValueError) as exc:
        print(f"fpstream: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        for lineno, t in records:
            try:
                result = miner.push(t)
            except MissingUtilityError as exc:
                print(f"fpstream: line {lineno}: {exc}", file=stderr)
                return EXIT_UTILITY
            except ValueError as exc:
                if lenient:
                    print(f"fpstream: skipped line {lineno}: {exc}", file=stderr)
                    continue
                raise RecordError(str(exc), lineno) from None
            if result is not None:
                emit(result)
                if lenient:
                    stdout.flush()
    except RecordError as exc:
        print(f"fpstream: {exc}", file=stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_mine(args, stdin=None, stdout=None, stderr=None) -> int:
    """Mine every full window of the input and print one report per window."""
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    try:
        fh, close = _open_input(args.input, stdin)
    except OSError as exc:
        print(f"fpstream: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        return _drive(args, _strict_records(fh), lambda r: stdout.write(r.to_jsonl()), stdout, stderr)
    finally:
        if close:
            fh.close()


def cmd_stream(args, stdin=None, stdout=None, stderr=None) -> int:
    """Like ``mine`` but reads standard input, skips malformed lines and
    flushes after each report."""
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    try:
        fh, close = _open_input(args.input, stdin)
    except OSError as exc:
        print(f"fpstream: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        return _drive(
            args,
            _lenient_records(fh, stderr),
            lambda r: stdout.write(r.to_jsonl()),
            stdout,
            stderr,
            lenient=True,
        )
    finally:
        if close:
            fh.close()


def alert_record(window_id, pattern, utility) -> str:
    return f'{{"window": {window_id}, "pattern": {json.dumps(list(pattern))}, "utility": {format_decimal(utility)}}}'


def cmd_report_anomaly(args, stdin=None, stdout=None, stderr=None) -> int:
    """Print an alert for every high-utility pattern whose utility exceeds the budget."""
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    if args.mode != "hup":
        print("fpstream: anomaly reports need --mode hup", file=stderr)
        return EXIT_INPUT
    budget = args.budget

    def emit(result):
        for p in result:
            if p.utility > budget:
                stdout.write(alert_record(result.window_id, p.pattern, p.utility) + "\n")

    try:
        fh, close = _open_input(args.input, stdin)
    except OSError as exc:
        print(f"fpstream: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        return _drive(args, _strict_records(fh), emit, stdout, stderr)
    finally:
        if close:
            fh.close()


def cmd_gen(args, stdout=None, stderr=None) -> int:
    """Write a seeded synthetic event stream."""
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    try:
        stream = generate_stream(args.sensors, args.count, args.density, args.seed)
        for t in stream:
            stdout.write(t.to_json() + "\n")
    except ValueError as exc:
        print(f"fpstream: {exc}", file=stderr)
        return EXIT_INPUT
    return EXIT_OK


def _add_window_flags(p, default_mode="freq"):
    p.add_argument("--input", default="-", help="event JSONL file, or - for standard input")
    p.add_argument("--output", default="-", help="report file, or - for standard output")
    p.add_argument("--batch-size", type=_positive, default=2)
    p.add_argument("--window-batches", type=_positive, default=2)
    p.add_argument("--mode", choices=("freq", "hup"), default=default_mode)
    p.add_argument("--min-support", type=_positive, default=1)
    p.add_argument("--min-utility", type=_decimal, default=0)
    p.add_argument("--utility-table", default=None, help="CSV with header sensor,watts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpstream", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine every full window of an event file")
    _add_window_flags(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("stream", help="mine windows incrementally from standard input")
    _add_window_flags(p)
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("anomaly", aliases=["report-anomaly"], help="flag patterns above a power budget")
    _add_window_flags(p, default_mode="hup")
    p.add_argument("--budget", type=_decimal, required=True)
    p.set_defaults(func=cmd_report_anomaly)

    p = sub.add_parser("gen", help="generate a synthetic event stream")
    p.add_argument("--sensors", type=_positive, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out: IO[str] = sys.stdout
    close = False
    if getattr(args, "output", "-") != "-":
        out = open(args.output, "w", encoding="utf-8")
        close = True
    try:
        if args.func is cmd_gen:
            return cmd_gen(args, stdout=out)
        return args.func(args, stdout=out)
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
