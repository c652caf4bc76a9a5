"""Expected run counts of a trace and the pairwise geometric coefficients.

At deletion probability 1/2 everything is exact (:class:`DyadicRational`).
All sums over index pairs are evaluated with linear-time prefix recurrences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

import numpy as np

from .bitseq import BitSeq
from .dyadic import DyadicRational
from .errors import InvalidParameter

Number = Union[DyadicRational, Fraction, float]


def _mask(S: Iterable[int] | np.ndarray, n: int) -> np.ndarray:
    if isinstance(S, np.ndarray) and S.dtype == bool:
        if S.size != n:
            raise InvalidParameter("mask length differs from n")
        return S
    m = np.zeros(n, dtype=bool)
    idx = np.fromiter(S, dtype=np.int64)
    if idx.size:
        if idx.min() < 1 or idx.max() > n:
            raise InvalidParameter("index set must lie in 1..n")
        m[idx - 1] = True
    return m


def pair_sum(S, q, n: int, T=None):
    """Sum of ``q**(j-i)`` over pairs ``i < j`` with ``i`` in ``S`` and ``j`` in ``T``.

    ``T`` defaults to ``S``. Index sets are 1-based. Runs in O(n) using
    ``t_j = q * (t_{j-1} + [j-1 in S])``; the arithmetic type follows ``q``.
    """
    src = _mask(S, n)
    dst = src if T is None else _mask(T, n)
    zero = q * 0
    t = zero
    total = zero
    for j in range(1, n):
        t = q * (t + 1) if src[j - 1] else q * t
        if dst[j]:
            total = total + t
    return total


def _dyadic_near(src: np.ndarray, dst: np.ndarray) -> DyadicRational:
    # sum of 2**-(j-i), i in src, j in dst, i < j
    n = src.size
    prefix = 0  # sum of 2**i over src positions seen so far
    acc = 0
    for j in range(n):
        if dst[j] and prefix:
            acc += prefix << (n - j)
        if src[j]:
            prefix += 1 << j
    return DyadicRational(acc, n)


def _dyadic_far(src: np.ndarray, dst: np.ndarray) -> DyadicRational:
    # sum of 2**-(n-(j-i)), i in src, j in dst, i < j
    n = src.size
    prefix = 0  # sum of 2**(n-i) over src positions seen so far
    acc = 0
    for j in range(n):
        if dst[j] and prefix:
            acc += prefix << j
        if src[j]:
            prefix += 1 << (n - j)
    return DyadicRational(acc, 2 * n)


@dataclass(frozen=True)
class CoefficientSet:
    """The four pairwise coefficients of a length-``n`` sequence at q = 1/2.

    ``alpha``/``delta`` weight same-symbol/cross-symbol pairs by
    ``2**-(j-i)``; ``beta``/``gamma`` weight them by ``2**-(n-(j-i))``.
    """

    n: int
    alpha: DyadicRational
    beta: DyadicRational
    gamma: DyadicRational
    delta: DyadicRational

    def as_dict(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in ("alpha", "beta", "gamma", "delta")}


def coefficients(x: BitSeq) -> CoefficientSet:
    ones = x.array.astype(bool)
    zeros = ~ones
    alpha = _dyadic_near(zeros, zeros) + _dyadic_near(ones, ones)
    delta = _dyadic_near(zeros, ones) + _dyadic_near(ones, zeros)
    beta = _dyadic_far(zeros, zeros) + _dyadic_far(ones, ones)
    gamma = _dyadic_far(zeros, ones) + _dyadic_far(ones, zeros)
    return CoefficientSet(len(x), alpha, beta, gamma, delta)


def an_bn(n: int) -> tuple[DyadicRational, DyadicRational]:
    """Length-only totals ``alpha + delta`` and ``beta + gamma``.

    >>> [str(v) for v in an_bn(16)]
    ['458753/32768', '65519/32768']
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    tail = DyadicRational(1, n - 1)
    return n - 2 + tail, 2 - (n + 1) * tail


def coefficient_recursion(c: CoefficientSet) -> tuple[CoefficientSet, CoefficientSet]:
    """Coefficients of ``x||x`` and ``x||~x`` from those of ``x``.

    The two ``delta`` values are closed off through ``delta = a(2n) - alpha``.
    """
    n = c.n
    h = DyadicRational(1, n)
    h2 = DyadicRational(1, n - 1)
    nh = n * h
    a2n, _ = an_bn(2 * n)

    alpha_hat = 2 * c.alpha + c.beta + h * c.alpha + nh
    alpha_chk = 2 * c.alpha + c.gamma + h * c.delta
    beta_hat = c.beta + h2 * c.beta + h * c.alpha + nh
    beta_chk = c.gamma + h2 * c.beta + h * c.delta
    gamma_hat = c.gamma + h2 * c.gamma + h * c.delta
    gamma_chk = c.beta + h2 * c.gamma + h * c.alpha + nh

    return (
        CoefficientSet(2 * n, alpha_hat, beta_hat, gamma_hat, a2n - alpha_hat),
        CoefficientSet(2 * n, alpha_chk, beta_chk, gamma_chk, a2n - alpha_chk),
    )


@dataclass(frozen=True)
class ExpectedRuns:
    """Expected numbers of runs of 0s and 1s in one trace."""

    zeros: Number
    ones: Number
    q: Number

    @property
    def total(self) -> Number:
        return self.zeros + self.ones


def _is_half(q) -> bool:
    try:
        return q == Fraction(1, 2)
    except TypeError:
        return False


def expected_runs(x: BitSeq, q) -> ExpectedRuns:
    """Expected runs of 0s and 1s in a trace of ``x`` at deletion probability ``q``.

    Returns :class:`DyadicRational` values when ``q`` equals 1/2, exact
    :class:`~fractions.Fraction` values for any other rational ``q``, and
    floats otherwise.
    """
    if _is_half(q):
        ones = x.array.astype(bool)
        zeros = ~ones
        n, w = len(x), int(ones.sum())
        p0 = _dyadic_near(zeros, zeros)
        p1 = _dyadic_near(ones, ones)
        half = DyadicRational(1, 1)
        return ExpectedRuns(half * (n - w - p0), half * (w - p1), half)

    if isinstance(q, DyadicRational):
        q = q.to_fraction()
    elif isinstance(q, Rational):
        q = Fraction(q)
    else:
        q = float(q)
    if not 0 < q < 1:
        raise InvalidParameter(f"q must lie strictly between 0 and 1, got {q}")
    ones = x.array.astype(bool)
    n, w = len(x), int(ones.sum())
    ratio = (1 - q) / q
    p0 = pair_sum(~ones, q, n)
    p1 = pair_sum(ones, q, n)
    return ExpectedRuns((1 - q) * (n - w - ratio * p0), (1 - q) * (w - ratio * p1), q)


def expected_total_runs_half(x: BitSeq) -> DyadicRational:
    """``E[R_x]`` at q = 1/2 written through the same-symbol coefficient: ``(n - alpha)/2``."""
    ones = x.array.astype(bool)
    alpha = _dyadic_near(~ones, ~ones) + _dyadic_near(ones, ones)
    return DyadicRational(1, 1) * (len(x) - alpha)
