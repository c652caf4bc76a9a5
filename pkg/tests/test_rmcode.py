import itertools

import numpy as np
import pytest

from rmtrace.bitseq import BitSeq, complement
from rmtrace.errors import InvalidParameter, ResourceLimit
from rmtrace.rmcode import encode, enumerate_codewords, recursive_codewords
from rmtrace.verify import TABLE1


def _eval(m, u0, u):
    # direct evaluation at lexicographic points, z1 most significant
    out = []
    for z in itertools.product((0, 1), repeat=m):
        out.append((u0 + sum(a * b for a, b in zip(u, z))) % 2)
    return "".join(map(str, out))


@pytest.mark.parametrize("m, u0, u, expected", [(2, 0, (0, 0), "0000"), (2, 0, (1, 0), "0011"),
                                                (2, 1, (0, 1), "1010")])
def test_encode(m, u0, u, expected):
    assert _eval(m, u0, u) == expected
    assert str(encode(m, u0, u)) == expected


def test_encode_matches_direct_evaluation():
    for u0, *u in itertools.product((0, 1), repeat=5):
        assert str(encode(4, u0, u)) == _eval(4, u0, u)
    with pytest.raises(InvalidParameter):
        encode(0, 0, ())


def test_small_codebooks():
    assert {str(w) for w in enumerate_codewords(1)} == {"00", "01", "10", "11"}
    assert {str(w) for w in enumerate_codewords(2)} == {
        "0000", "0011", "0101", "0110", "1111", "1100", "1010", "1001"}
    assert {str(w) for w in enumerate_codewords(4).with_first_bit(0)} == set(TABLE1)


def test_canonical_order():
    book = enumerate_codewords(3)
    tuples = list(itertools.product((0, 1), repeat=4))
    assert [str(w) for w in book] == [_eval(3, t[0], t[1:]) for t in tuples]


@pytest.mark.parametrize("m", range(1, 11))
def test_codebook_structure(m):
    book = enumerate_codewords(m)  # asserts both constructions agree
    n = 1 << m
    assert len(book) == 2 * n and len(set(book.codewords)) == 2 * n
    w = book.words.sum(axis=1)
    assert set(w.tolist()) <= {0, n // 2, n}
    assert (w == 0).sum() == 1 and (w == n).sum() == 1
    half = w == n // 2
    assert (half & (book.words[:, 0] == 0)).sum() == n - 1
    assert (half & (book.words[:, 0] == 1)).sum() == n - 1
    words = set(book.codewords)
    assert all(complement(x) in words for x in words)
    if m >= 2:
        rm2 = {str(x) for x in enumerate_codewords(2)}
        assert all(str(x)[:4] in rm2 for x in words)


@pytest.mark.parametrize("m", range(1, 8))
def test_minimum_distance(m):
    W = enumerate_codewords(m).words.astype(np.int16)
    d = (W[:, None, :] != W[None, :, :]).sum(axis=2)
    np.fill_diagonal(d, 10**6)
    assert d.min() == (1 << m) // 2


def test_recursion_set_and_guard():
    assert recursive_codewords(3) == set(enumerate_codewords(3).codewords)
    with pytest.raises(ResourceLimit):
        enumerate_codewords(5, max_m=4)
    book = enumerate_codewords(3)
    x = book.codewords[5]
    assert book.index(x) == 5 and x in book and BitSeq("0" * 7) not in book
