import pytest

from fpstream import Batch, EventTransaction, UtilityTable, WindowConfig

# The eight time slots of the example smart-home stream, sensors A-E.
GOLDEN_ROWS = [
    ("D", "E"),
    ("A", "C"),
    ("B", "C", "D"),
    ("A", "B"),
    ("B", "E"),
    ("A", "B", "D"),
    ("A", "B", "C"),
    ("A", "B", "D", "E"),
]
GOLDEN_WATTS = {"A": 3, "B": 1, "C": 4, "D": 2, "E": 5}


def golden_transactions():
    return [EventTransaction(i, rows) for i, rows in enumerate(GOLDEN_ROWS, start=1)]


def golden_batches(batch_size=2):
    tx = golden_transactions()
    return [
        Batch(j + 1, tuple(tx[k:k + batch_size]))
        for j, k in enumerate(range(0, len(tx), batch_size))
    ]


def golden_jsonl():
    return "".join(t.to_json() + "\n" for t in golden_transactions())


@pytest.fixture
def golden():
    return golden_transactions()


@pytest.fixture
def batches():
    return golden_batches()


@pytest.fixture
def cfg22():
    return WindowConfig(2, 2)


@pytest.fixture
def watts():
    return UtilityTable(GOLDEN_WATTS)


@pytest.fixture
def watts_csv(tmp_path):
    p = tmp_path / "watts.csv"
    p.write_text("sensor,watts\n" + "".join(f"{k},{v}\n" for k, v in GOLDEN_WATTS.items()))
    return p


# -- acceptance summary -------------------------------------------------------

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE.append((marker.args[0], rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome, duration in _ACCEPTANCE:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  ({duration:.2f}s)")
