from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from digitfn.digits import digit_sum, naf_weight
from digitfn.errors import CompositionError, DomainError
from digitfn.funcs import get_spec, optimal_rep_count, pow_digit_sum
from digitfn.quasi import (
    ADDITIVE,
    MULTIPLICATIVE,
    BSetAutomaton,
    QuasiSpec,
    SplitEvaluator,
    combine,
    enumerate_bset,
    eval_by_splitting,
    exp_log_bridge,
    in_bset,
    monotone_parameter_check,
    split_blocks,
    verify_identity,
)

HN = get_spec("naf-weight")
RHO = get_spec("opt-reps")


def test_verify_identity_naf_weight():
    assert verify_identity(HN, 32, 6) is None


def test_verify_identity_naf_weight_r1_counterexample():
    bad = verify_identity(HN, 32, 6, r=1)
    assert bad is not None
    # first failure in (a, k, b) order, confirmed by direct scan
    first = next(
        (a, k, b)
        for a in range(33) for k in range(7) for b in range(2 ** k)
        if naf_weight(2 ** (k + 1) * a + b) != naf_weight(a) + naf_weight(b)
    )
    assert (bad.a, bad.k, bad.b) == first
    assert bad.lhs != bad.rhs


def test_verify_identity_opt_reps():
    assert verify_identity(RHO, 32, 6) is None


@pytest.mark.parametrize("f, s", [(HN, 3), (HN, 5), (RHO, 4)])
def test_monotone_parameter(f, s):
    assert monotone_parameter_check(f, s) is None


def test_monotone_parameter_rejects_smaller():
    with pytest.raises(ValueError):
        monotone_parameter_check(HN, 1)


def test_combine():
    zero = combine(HN, HN, 1, -1)
    assert zero.r == HN.r and all(zero(n) == 0 for n in range(200))
    both = combine(HN, get_spec("adjusted-gray"), 1, 1)
    assert both.r == 2 and verify_identity(both, 32, 6) is None
    only = combine(HN, get_spec("adjusted-gray"), 1, 0)
    assert only.r == 2 and all(only(n) == HN(n) for n in range(200))


def test_combine_errors():
    with pytest.raises(CompositionError):
        combine(HN, RHO, 1, 1)
    other = QuasiSpec("d3", 3, 0, ADDITIVE, lambda n: digit_sum(n, 3))
    with pytest.raises(CompositionError):
        combine(HN, other, 1, 1)


def test_exp_log_bridge():
    ds = get_spec("digit-sum")
    g = exp_log_bridge(ds, 2)
    assert g.mode == MULTIPLICATIVE and g.r == 0
    assert all(g(n) == pow_digit_sum(n) for n in range(300))
    back = exp_log_bridge(g, 2)
    assert back.mode == ADDITIVE and all(back(n) == ds(n) for n in range(300))
    logrho = exp_log_bridge(RHO, "e")
    assert logrho.r == 3 and verify_identity(logrho, 16, 5) is None
    assert math.isclose(logrho(45), math.log(5))


def test_exp_log_bridge_domain():
    bad = QuasiSpec("neg", 2, 0, MULTIPLICATIVE, lambda n: 1 - n)
    with pytest.raises(DomainError):
        exp_log_bridge(bad, 2)(5)
    with pytest.raises(DomainError):
        exp_log_bridge(HN, -2)


def test_split_examples():
    s = split_blocks(314159265, 2, 2)
    assert s.blocks == (4, 348, 432, 80, 1)
    assert s.reduced == (1, 87, 27, 5, 1)
    s = split_blocks(204280974, 2, 3)
    assert s.blocks == (48, 360, 328, 14)
    assert s.reduced == (3, 45, 41, 7)
    assert split_blocks(0, 2, 2).blocks == ()


def test_split_r0_is_digitwise():
    assert split_blocks(0b1011, 2, 0).reduced == (1, 1, 1)
    assert split_blocks(305, 10, 0).blocks == (30, 5)
    assert split_blocks(305, 10, 0).reduced == (3, 5)


@given(st.integers(min_value=0, max_value=2 ** 64), st.integers(min_value=2, max_value=5),
       st.integers(min_value=0, max_value=4))
def test_split_reconstructs(n, q, r):
    s = split_blocks(n, q, r)
    acc = 0
    for b in s.blocks:
        acc = acc * q ** _len(b, q) + b
    assert acc == n
    for b, m, e in zip(s.blocks, s.reduced, s.exponents):
        assert m % q != 0 and m * q ** e == b


@given(st.integers(min_value=0, max_value=10 ** 40), st.integers(min_value=37, max_value=60),
       st.integers(min_value=1, max_value=3))
def test_split_large_base_matches_reconstruction(n, q, r):
    s = split_blocks(n, q, r)
    acc = 0
    for b in s.blocks:
        acc = acc * q ** _len(b, q) + b
    assert acc == n


def _len(n, q):
    k = 0
    while n:
        n //= q
        k += 1
    return k


def test_eval_by_splitting_examples():
    assert eval_by_splitting(HN, 314159265) == 11
    assert eval_by_splitting(RHO, 204280974) == 10
    assert eval_by_splitting(HN, 0) == 0


def test_split_shift_invariance():
    ev = SplitEvaluator(HN)
    for n in range(0, 1 << 14, 7):
        for h in range(6):
            assert ev(n * 2 ** h) == ev(n)


@given(st.integers(min_value=0, max_value=2 ** 80))
def test_splitting_matches_direct(n):
    assert eval_by_splitting(HN, n) == naf_weight(n)
    assert eval_by_splitting(RHO, n) == optimal_rep_count(n)


def test_enumerate_bset_examples():
    assert enumerate_bset(2, 1, 4) == [1, 3, 7, 15]
    assert enumerate_bset(2, 2, 3) == [1, 3, 5, 7]
    counts = BSetAutomaton(2, 2).counts(12)[1:]
    fib = [1, 1]
    while len(fib) < 12:
        fib.append(fib[-1] + fib[-2])
    assert counts == fib


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_bset_count_matches_enumeration(q, r):
    members = enumerate_bset(q, r, 14 if q == 2 else 9)
    by_len = BSetAutomaton(q, r).counts(14 if q == 2 else 9)[1:]
    lens = [_len(n, q) for n in members]
    assert [lens.count(k) for k in range(1, len(by_len) + 1)] == by_len
    assert lens == sorted(lens) and members == sorted(members)
    assert all(in_bset(n, q, r) for n in members)


def test_bset_binary_matches_oracle():
    for r in (1, 2, 3):
        expected = [n for n in range(1, 1 << 12) if oracles.in_bset(n, r)]
        assert enumerate_bset(2, r, 12) == expected


def test_bset_growth_rates():
    golden = (1 + 5 ** 0.5) / 2
    assert math.isclose(BSetAutomaton(2, 2).growth_rate(), golden, rel_tol=1e-12)
    assert math.isclose(BSetAutomaton(2, 1).growth_rate(), 1.0, rel_tol=1e-12)


@given(st.integers(min_value=0, max_value=2 ** 20))
def test_zero_and_shift(n):
    for f in (HN, RHO, get_spec("adjusted-gray")):
        assert f(2 * n) == f(n)
    assert HN(0) == 0 and RHO(0) == 1


def test_fraction_values_stay_exact():
    third = combine(HN, HN, Fraction(1, 3), 0)
    assert third(27) == 1 and isinstance(third(5), Fraction)
