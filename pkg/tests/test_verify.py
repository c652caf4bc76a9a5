import itertools
from fractions import Fraction

import pytest

from rmtrace.bitseq import BitSeq, count_runs
from rmtrace.dyadic import DyadicRational as D, parse
from rmtrace.errors import InvalidParameter, ResourceLimit
from rmtrace.runstats import an_bn, coefficients, expected_runs
from rmtrace.verify import (TABLE1, TAIL_LIMIT, brute_force_expected_runs, check_conditions,
                            check_table1, identity_suite, tail_sum, tail_sum_closed)


def slow_oracle(s, q):
    # one trace at a time, straight from the definition of a trace
    n = len(s)
    z = o = Fraction(0)
    for omega in itertools.product((0, 1), repeat=n):
        pr = q ** sum(omega) * (1 - q) ** (n - sum(omega))
        rc = count_runs(BitSeq([int(c) for c, d in zip(s, omega) if not d]))
        z += pr * rc.zeros
        o += pr * rc.ones
    return z, o


@pytest.mark.parametrize("s", ["", "0", "1", "01", "0110", "00101110"])
@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(1, 3)])
def test_brute_force_vs_slow_oracle(s, q):
    e = brute_force_expected_runs(BitSeq(s), q)
    assert (e.zeros, e.ones) == slow_oracle(s, q)


def test_brute_force_examples():
    assert brute_force_expected_runs(BitSeq("01"), Fraction(1, 2)).total == 1
    assert brute_force_expected_runs(BitSeq("0"), Fraction(1, 3)).zeros == Fraction(2, 3)
    x = BitSeq("0110")
    assert brute_force_expected_runs(x, Fraction(1, 2)).total == expected_runs(x, Fraction(1, 2)).total
    with pytest.raises(ResourceLimit):
        brute_force_expected_runs(BitSeq("0" * 21), Fraction(1, 2))


def test_table1_rows():
    assert TABLE1["0000111100001111"] == ("8929/1024", "1811/8192", "58275/32768")
    assert TABLE1["0101010101010101"] == ("36409/8192", "7279/8192", "36403/32768")
    res = check_table1()
    assert res.passed and res.summary() == "48/48 exact"


def test_table1_can_fail(monkeypatch):
    import rmtrace.verify as v
    bad = dict(v.TABLE1)
    bad["0101010101010101"] = ("36409/8192", "7279/8192", "36405/32768")
    monkeypatch.setattr(v, "TABLE1", bad)
    res = v.check_table1()
    assert not res.passed and res.matches == 47
    assert res.diffs[0]["computed"] == "36403/32768"


def test_conditions_m4():
    rep = check_conditions(4)
    mg = rep.margins
    assert mg["C1"].value == parse("2025/32768")
    assert mg["C3"].value == parse("2003/32768")
    assert mg["C4"].value == parse("2003/32768")
    assert mg["C2"].value >= 0
    assert rep.passed and rep.within_guarantee and not rep.sampled
    assert rep.pairs_checked == 16 * 15 // 2


def test_margins_reproducible_from_witness():
    rep = check_conditions(5)
    x, y = (coefficients(BitSeq(w)) for w in rep.margins["C1"].witness)
    assert abs(x.alpha - y.alpha) == rep.margins["C1"].value
    (w,) = rep.margins["C4"].witness
    c = coefficients(BitSeq(w))
    assert abs(c.beta - c.gamma) == rep.margins["C4"].value


@pytest.mark.parametrize("m", [4, 5, 6])
def test_complement_halves_agree(m):
    a = check_conditions(m, first_bit=0).margins
    b = check_conditions(m, first_bit=1).margins
    assert {k: v.value for k, v in a.items()} == {k: v.value for k, v in b.items()}


def test_small_m_outside_guarantee():
    rep = check_conditions(3)
    assert not rep.within_guarantee
    assert rep.as_dict()["verdict_scope"] == "outside paper guarantee"
    with pytest.raises(InvalidParameter):
        check_conditions(1)
    with pytest.raises(InvalidParameter):
        check_conditions(9)


def test_sampled_scan_flagged():
    rep = check_conditions(5, sample=50, seed=1)
    assert rep.sampled and rep.pairs_checked == 50
    full = check_conditions(5)
    assert rep.margins["C1"].value >= full.margins["C1"].value


def test_tail_sums():
    assert TAIL_LIMIT == sum((Fraction(k, 2**k) for k in range(16, 400)), Fraction(0)) + \
        sum((Fraction(k, 2**k) for k in range(400, 2000)), Fraction(0)) + Fraction(2001, 2**1999)
    assert TAIL_LIMIT == 17 * D(1, 15)
    assert float(TAIL_LIMIT) < 0.001
    for m in range(1, 11):
        n = 1 << m
        assert tail_sum(n) == tail_sum_closed(n)
        assert TAIL_LIMIT - tail_sum(n) == (n // 2 + 2) * D(1, n // 2) or n // 2 < 16


@pytest.mark.parametrize("m", range(1, 7))
def test_tail_limit_gap_bound(m):
    # the stated 2^(-n/2+6) gap bound; holds for n <= 124 only
    n = 1 << m
    assert TAIL_LIMIT - tail_sum(n) <= D(1, n // 2 - 6)


def test_identity_suite_examples():
    x = BitSeq("0110")
    assert all(identity_suite(x, [x]).values())
    cx, cy = (coefficients(BitSeq(s)) for s in ("01", "00"))
    assert cx.alpha - cy.alpha == -Fraction(1, 2)
    assert cx.delta - cy.delta == Fraction(1, 2)
    res = identity_suite(BitSeq("01"), [BitSeq("00")])
    assert all(res.values())
    rng_x = BitSeq("0111010010101110110101000101001110100101110101101011010110100101")
    assert all(identity_suite(rng_x, trials=20, seed=3).values())
    b64 = an_bn(64)[1]
    c = coefficients(rng_x)
    assert c.beta + c.gamma == b64
