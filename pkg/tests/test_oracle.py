import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden_transactions
from streams import random_stream

from fpstream import BoundsExceededError, EventTransaction, MiningRequest, UtilityTable
from fpstream.oracle import WindowSnapshot, oracle_mine, oracle_support, oracle_table, oracle_twu, oracle_utility


def w1():
    return WindowSnapshot(tuple(golden_transactions()[:4]), 1)


def w2():
    return WindowSnapshot(tuple(golden_transactions()[4:]), 3)


def test_oracle_support():
    assert oracle_support(w2(), {"A", "B"}) == 3
    assert oracle_support(w2(), {"A", "B", "C", "D", "E", "F"}) == 0
    single = WindowSnapshot((EventTransaction(5, ("A", "C")),))
    assert oracle_support(single, {"A", "C"}) == 1


def test_oracle_mine_w1():
    got = oracle_mine(w1(), MiningRequest(min_support=2))
    assert got.supports() == {("A",): 2, ("B",): 2, ("C",): 2, ("D",): 2}


def test_oracle_mine_empty_and_unit():
    assert len(oracle_mine(WindowSnapshot(()), MiningRequest(min_support=1))) == 0
    hup = oracle_mine(w2(), MiningRequest("high-utility", min_utility=1), UtilityTable.unit())
    freq = oracle_mine(w2(), MiningRequest(min_support=1))
    assert hup.supports() == freq.supports()


def test_oracle_twu(watts):
    assert oracle_twu(w2(), {"A"}, watts) == 25
    assert oracle_twu(w2(), {"C", "E"}, watts) == 0
    unit = UtilityTable.unit()
    assert oracle_twu(w2(), {"B"}, unit) == 2 + 3 + 3 + 4


def test_oracle_bounds():
    txs = tuple(EventTransaction(i, ("A",)) for i in range(1, 34))
    with pytest.raises(BoundsExceededError):
        oracle_table(WindowSnapshot(txs))
    wide = (EventTransaction(1, tuple(f"s{i:02d}" for i in range(17))),)
    with pytest.raises(BoundsExceededError):
        oracle_table(WindowSnapshot(wide))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_twu_bounds_utility_and_antimonotone(seed):
    _, batches, table = random_stream(seed)
    txs = tuple(t for b in batches for t in b)
    w = WindowSnapshot(txs)
    tab = oracle_table(w, table)
    for pattern, (sup, util) in tab.items():
        assert oracle_utility(w, pattern, table) == util
        if sup:
            assert oracle_twu(w, pattern, table) >= util
        for drop in range(len(pattern)):
            sub = pattern[:drop] + pattern[drop + 1:]
            if sub:
                assert tab[sub][0] >= sup
