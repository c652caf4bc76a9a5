import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmtrace.bitseq import BitSeq, check, complement, hat
from rmtrace.dyadic import DyadicRational as D, parse
from rmtrace.errors import InvalidParameter
from rmtrace.runstats import (an_bn, coefficient_recursion, coefficients, expected_runs,
                              expected_total_runs_half, pair_sum)

HALF = Fraction(1, 2)
bitstrings = st.text(alphabet="01", min_size=1, max_size=120)


def naive_pairs(s, weight, same):
    # O(n^2) enumeration of the defining double sums
    n = len(s)
    total = Fraction(0)
    for i, j in itertools.combinations(range(n), 2):
        if (s[i] == s[j]) == same:
            total += weight(n, j - i)
    return total


def near(n, d):
    return HALF**d


def far(n, d):
    return HALF ** (n - d)


def test_pair_sum_examples():
    assert pair_sum({1, 2}, HALF, 2) == HALF
    assert pair_sum(set(), HALF, 5) == 0
    assert pair_sum({3}, HALF, 5) == 0
    expected = sum(HALF ** (j - i) for i, j in itertools.combinations([1, 2, 3], 2))
    assert expected == Fraction(5, 4)
    assert pair_sum({1, 2, 3}, HALF, 3) == expected


@given(st.sets(st.integers(1, 40)), st.fractions(0, 1).filter(lambda q: 0 < q < 1))
def test_pair_sum_matches_enumeration(S, q):
    n = 40
    expected = sum((q ** (j - i) for i, j in itertools.combinations(sorted(S), 2)), Fraction(0))
    assert pair_sum(S, q, n) == expected


def test_expected_runs_examples():
    e = expected_runs(BitSeq("0"), HALF)
    assert (e.zeros, e.ones) == (HALF, 0)
    # brute force over the four masks of 00: run counts 1, 1, 1, 0
    assert expected_runs(BitSeq("00"), HALF).zeros == Fraction(3, 4)
    e = expected_runs(BitSeq("01"), HALF)
    assert (e.zeros, e.ones, e.total) == (HALF, HALF, 1)
    total = expected_runs(BitSeq("0" * 16), HALF).total
    assert total == (16 - parse("458753/32768")) * HALF
    assert total == Fraction(65535, 65536)
    assert isinstance(total, D)


def test_expected_runs_types_and_domain():
    x = BitSeq("0110")
    assert isinstance(expected_runs(x, Fraction(1, 3)).total, Fraction)
    assert isinstance(expected_runs(x, 0.3).total, float)
    assert float(expected_runs(x, 0.3).total) == pytest.approx(float(expected_runs(x, Fraction(3, 10)).total))
    for q in (0, 1, Fraction(3, 2)):
        with pytest.raises(InvalidParameter):
            expected_runs(x, q)


@pytest.mark.parametrize("s, alpha, beta, gamma", [
    ("0000000011111111", "769/64", "247/16384", "65025/32768"),
    ("0110100110010110", "170741/32768", "33761/32768", "15879/16384"),
])
def test_coefficients_table_rows(s, alpha, beta, gamma):
    c = coefficients(BitSeq(s))
    assert (c.alpha, c.beta, c.gamma) == (parse(alpha), parse(beta), parse(gamma))


def test_coefficients_01():
    c = coefficients(BitSeq("01"))
    assert (c.alpha, c.beta, c.gamma, c.delta) == (0, 0, HALF, HALF)


@given(bitstrings)
def test_coefficients_match_definitions(s):
    c = coefficients(BitSeq(s))
    assert c.alpha == naive_pairs(s, near, True)
    assert c.delta == naive_pairs(s, near, False)
    assert c.beta == naive_pairs(s, far, True)
    assert c.gamma == naive_pairs(s, far, False)


@pytest.mark.parametrize("n, a, b", [(1, "0", "0"), (2, "1/2", "1/2"),
                                     (16, "458753/32768", "65519/32768")])
def test_an_bn(n, a, b):
    assert an_bn(n) == (parse(a), parse(b))
    # defining sums
    assert an_bn(n)[0] == sum((Fraction(n - k, 2**k) for k in range(1, n)), Fraction(0))
    assert an_bn(n)[1] == sum((Fraction(k, 2**k) for k in range(1, n)), Fraction(0))


def test_recursion_examples():
    c = coefficients(BitSeq("01"))
    h, k = coefficient_recursion(c)
    # direct: 0101 has same-symbol pairs (1,3),(2,4); 0110 has (1,4) and (2,3)
    assert h.alpha == Fraction(1, 4) + Fraction(1, 4) == HALF
    assert k.alpha == Fraction(1, 8) + Fraction(1, 2) == Fraction(5, 8)
    for n in (1, 2, 5, 16, 33):
        a_n, b_n = an_bn(n)
        h, _ = coefficient_recursion(coefficients(BitSeq("0" * n)))
        assert h.alpha == 2 * a_n + b_n + D(1, n) * a_n + n * D(1, n) == an_bn(2 * n)[0]


@settings(max_examples=150)
@given(bitstrings)
def test_recursion_agrees_with_direct(s):
    x = BitSeq(s)
    h, k = coefficient_recursion(coefficients(x))
    assert h == coefficients(hat(x))
    assert k == coefficients(check(x))


@given(bitstrings)
def test_coefficient_invariants(s):
    x = BitSeq(s)
    c = coefficients(x)
    n = len(x)
    a_n, b_n = an_bn(n)
    assert c.alpha + c.delta == a_n and c.beta + c.gamma == b_n
    assert 0 <= c.alpha <= n and 0 <= c.delta <= n
    assert 0 <= c.beta <= 2 and 0 <= c.gamma <= 2
    assert coefficients(complement(x)) == c
    e = expected_runs(x, HALF)
    assert e.total == (n - c.alpha) * D(1, 1) == expected_total_runs_half(x)


@given(bitstrings, st.fractions(0, 1).filter(lambda q: 0 < q < 1))
def test_expected_runs_bounds(s, q):
    x = BitSeq(s)
    e = expected_runs(x, q)
    assert 0 <= e.zeros and 0 <= e.ones
    assert e.total <= (1 - q) * len(x)
