"""First-order Reed-Muller codes RM(m, 1).

Codewords are evaluation vectors of affine polynomials
``u0 + u1*x1 + ... + um*xm`` over all points of F_2^m in lexicographic order
(``x1`` most significant). Canonical codeword order is lexicographic in the
coefficient tuple ``(u0, u1, ..., um)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bitseq import BitSeq, check, hat
from .errors import InvalidParameter, ResourceLimit

MAX_M = 20


def _points(m: int) -> np.ndarray:
    # row z of shape (2**m, m), z1 most significant
    idx = np.arange(1 << m, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def encode(m: int, u0: int, u) -> BitSeq:
    """Evaluation vector of ``u0 + sum(u[i] * x[i])`` over F_2^m.

    >>> str(encode(2, 1, (0, 1)))
    '1010'
    """
    if m < 1:
        raise InvalidParameter("m must be >= 1")
    u = np.asarray(u, dtype=np.uint8)
    if u.shape != (m,):
        raise InvalidParameter(f"expected {m} linear coefficients, got {u.size}")
    word = (_points(m) @ u + u0) & 1
    return BitSeq.from_array(word)


def generator_matrix(m: int) -> np.ndarray:
    """Rows: the all-ones vector, then the evaluation vectors of x1..xm."""
    pts = _points(m)
    return np.vstack([np.ones(1 << m, dtype=np.uint8), pts.T])


def _coefficient_tuples(m: int) -> np.ndarray:
    # all (u0, ..., um) in lexicographic order
    return _points(m + 1)


def _evaluation_matrix(m: int) -> np.ndarray:
    return (_coefficient_tuples(m) @ generator_matrix(m)) & 1


def recursive_codewords(m: int) -> set[BitSeq]:
    """Codewords built by doubling RM(1,1) = F_2^2 with ``x||x`` and ``x||~x``."""
    if m < 1:
        raise InvalidParameter("m must be >= 1")
    words = {BitSeq(s) for s in ("00", "01", "10", "11")}
    for _ in range(m - 1):
        words = {hat(x) for x in words} | {check(x) for x in words}
    return words


@dataclass(frozen=True, eq=False)
class RMCodebook:
    """All ``2**(m+1)`` codewords of RM(m, 1) in canonical order."""

    m: int
    words: np.ndarray = field(repr=False)  # (2n, n) uint8, canonical order

    @property
    def n(self) -> int:
        return 1 << self.m

    def __len__(self) -> int:
        return self.words.shape[0]

    @cached_property
    def codewords(self) -> list[BitSeq]:
        return [BitSeq.from_array(row) for row in self.words]

    @cached_property
    def first_bit_index(self) -> dict[int, np.ndarray]:
        """Canonical indices of the codewords starting with 0 and with 1."""
        first = self.words[:, 0]
        return {b: np.flatnonzero(first == b) for b in (0, 1)}

    def with_first_bit(self, b: int) -> list[BitSeq]:
        return [self.codewords[i] for i in self.first_bit_index[b]]

    def index(self, x: BitSeq) -> int:
        hits = np.flatnonzero(np.all(self.words == x.array, axis=1))
        if hits.size == 0:
            raise KeyError(str(x))
        return int(hits[0])

    def __contains__(self, x: BitSeq) -> bool:
        return len(x) == self.n and bool(np.any(np.all(self.words == x.array, axis=1)))

    def __iter__(self):
        return iter(self.codewords)


def enumerate_codewords(m: int, max_m: int = MAX_M, cross_check: bool = True) -> RMCodebook:
    """Build RM(m, 1).

    With ``cross_check`` the evaluation-based list is compared against the
    recursive construction and an ``AssertionError`` is raised on mismatch.
    """
    if m < 1:
        raise InvalidParameter("m must be >= 1")
    if m > max_m:
        raise ResourceLimit(f"m={m} exceeds the configured maximum {max_m}")
    words = _evaluation_matrix(m)
    words.flags.writeable = False
    book = RMCodebook(m, words)
    if cross_check:
        by_eval = set(book.codewords)
        assert len(by_eval) == 1 << (m + 1), "duplicate codewords"
        assert by_eval == recursive_codewords(m), "constructions disagree"
    return book
