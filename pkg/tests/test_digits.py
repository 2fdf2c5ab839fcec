from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

import oracles
from digitfn.digits import (
    Expansion,
    count_block,
    count_runs,
    digit_sum,
    gray_weight,
    length,
    naf,
    naf_weight,
    run_lengths,
    to_expansion,
)
from digitfn.errors import InvalidBaseError, UnsupportedBlockError


@pytest.mark.parametrize("n, q, digits", [
    (0, 2, ()),
    (469, 2, (1, 1, 1, 0, 1, 0, 1, 0, 1)),
    (22, 2, (1, 0, 1, 1, 0)),
])
def test_to_expansion_examples(n, q, digits):
    e = to_expansion(n, q)
    assert e.digits == digits
    assert e.value == n


def test_zero_prints_as_zero():
    assert str(to_expansion(0, 2)) == "0"
    assert str(to_expansion(469, 2)) == "111010101"
    assert length(0, 2) == 0


def test_invalid_base():
    with pytest.raises(InvalidBaseError):
        to_expansion(5, 1)
    with pytest.raises(InvalidBaseError):
        digit_sum(5, 0)


def test_expansion_rejects_leading_zero():
    with pytest.raises(ValueError):
        Expansion(2, (0, 1))


@given(st.integers(min_value=0, max_value=10 ** 30), st.integers(min_value=2, max_value=40))
def test_expansion_round_trip(n, q):
    e = to_expansion(n, q)
    assert e.value == n
    assert (len(e.digits) == 0) == (n == 0)
    assert all(0 <= d < q for d in e.digits)
    assert not e.digits or e.digits[0] != 0


@pytest.mark.parametrize("n, expected", [(469, 2), (22, 1), (240150, 3), (0, 0)])
def test_count_block_examples(n, expected):
    assert count_block(n, 2, "0101") == expected


def test_count_block_all_zero_rejected():
    with pytest.raises(UnsupportedBlockError):
        count_block(5, 2, "000")


@given(st.integers(min_value=0, max_value=2 ** 40), st.sampled_from(["0101", "1", "10", "01", "110", "0010"]))
def test_count_block_matches_wide_padding(n, block):
    assert count_block(n, 2, block) == oracles.count_occurrences(n, block)


def test_count_block_other_base():
    # 10 in base 3 is 101, padded 00101 00 -> "01" occurs twice
    assert count_block(10, 3, "01") == 2
    assert count_block(10, 3, [1, 0, 1]) == 1


@pytest.mark.parametrize("n, runs", [(1910, [3, 3, 2]), (0, []), (21, [1, 1, 1])])
def test_run_lengths_examples(n, runs):
    assert sorted(run_lengths(n)) == sorted(runs)


@pytest.mark.parametrize("n, expected", [(0, 0), (2, 2), (3, 1)])
def test_gray_weight_examples(n, expected):
    assert gray_weight(n) == expected


def test_gray_weight_counts_runs():
    assert all(gray_weight(n) == oracles.runs_any(n) == count_runs(n) for n in range(1, 1 << 16))


def test_naf_examples():
    assert naf(27).digits == (1, 0, 0, -1, 0, -1)
    assert str(naf(27)) == "100T0T"
    assert naf(0).digits == ()
    assert naf(7).digits == (1, 0, 0, -1)


@pytest.mark.parametrize("n, expected", [(0, 0), (27, 3), (87, 4), (5, 2)])
def test_naf_weight_examples(n, expected):
    assert naf_weight(n) == expected


def test_naf_recursion_matches_construction():
    for n in range(1 << 16):
        e = naf(n)
        assert e.value == n
        assert e.is_nonadjacent
        assert naf_weight(n) == e.weight


def test_naf_minimal_weight_exhaustive():
    # full search over digit strings for small n, carry recursion up to 2^10
    for n in range(1 << 6):
        assert naf(n).weight == oracles.signed_reps_weight(n, n.bit_length() + 1)
    for n in range(1 << 10):
        assert naf(n).weight == oracles.min_signed(n)[0]


@pytest.mark.parametrize("n, q, s", [(0, 2, 0), (7, 2, 3), (469, 2, 6), (469, 10, 19)])
def test_digit_sum(n, q, s):
    assert digit_sum(n, q) == s
