"""Finite binary sequences and their run structure.

Sequences are immutable and stored packed (eight symbols per byte). Index
sets returned by :func:`support` and :func:`cosupport` are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


class BitSeq:
    """An immutable binary sequence.

    Parameters
    ----------
    bits : iterable of {0, 1}, str over {'0', '1'}, or ndarray
        The symbols, first position first.
    """

    __slots__ = ("_packed", "_n", "_cache")

    def __init__(self, bits: Iterable[int] | str | np.ndarray = ()):
        if isinstance(bits, str):
            if bits.strip("01"):
                raise ValueError(f"not a binary string: {bits!r}")
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
            if arr.size and not np.all((arr == 0) | (arr == 1)):
                raise ValueError("symbols must be 0 or 1")
        arr = arr.astype(np.uint8, copy=False).ravel()
        self._n = int(arr.size)
        self._packed = np.packbits(arr).tobytes()
        self._cache = None

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitSeq":
        """Build from a 0/1 array without re-validating the symbols."""
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.uint8).ravel()
        obj._n = int(arr.size)
        obj._packed = np.packbits(arr).tobytes()
        obj._cache = None
        return obj

    @property
    def array(self) -> np.ndarray:
        """Read-only unpacked view as a uint8 array."""
        if self._cache is None:
            a = np.unpackbits(np.frombuffer(self._packed, dtype=np.uint8), count=self._n)
            a.flags.writeable = False
            self._cache = a
        return self._cache

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, i: int) -> int:
        # 0-based like any Python sequence; use bit(j) for 1-based access
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(i)
        return (self._packed[i >> 3] >> (7 - (i & 7))) & 1

    def bit(self, j: int) -> int:
        """Symbol at 1-based position ``j``."""
        if not 1 <= j <= self._n:
            raise IndexError(j)
        return self[j - 1]

    def __iter__(self):
        return iter(self.array.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSeq):
            return NotImplemented
        return self._n == other._n and self._packed == other._packed

    def __hash__(self) -> int:
        return hash((self._n, self._packed))

    def __lt__(self, other: "BitSeq") -> bool:
        return (self._n, str(self)) < (other._n, str(other))

    def __str__(self) -> str:
        return (self.array + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        return f"BitSeq('{self}')"

    def __add__(self, other: "BitSeq") -> "BitSeq":
        return concat(self, other)

    def __invert__(self) -> "BitSeq":
        return complement(self)

    @property
    def weight(self) -> int:
        """Hamming weight."""
        return int(np.count_nonzero(self.array))


@dataclass(frozen=True)
class RunCounts:
    """Number of maximal runs of 0s and of 1s."""

    zeros: int
    ones: int

    @property
    def total(self) -> int:
        return self.zeros + self.ones


def count_runs(x: BitSeq) -> RunCounts:
    """Count maximal blocks of equal symbols, split by symbol.

    >>> count_runs(BitSeq("00110"))
    RunCounts(zeros=2, ones=1)
    """
    a = x.array
    if a.size == 0:
        return RunCounts(0, 0)
    starts = np.empty(a.size, dtype=bool)
    starts[0] = True
    np.not_equal(a[1:], a[:-1], out=starts[1:])
    ones = int(np.count_nonzero(starts & (a == 1)))
    return RunCounts(int(np.count_nonzero(starts)) - ones, ones)


def support(x: BitSeq) -> frozenset[int]:
    """1-based positions holding a 1."""
    return frozenset((np.flatnonzero(x.array) + 1).tolist())


def cosupport(x: BitSeq) -> frozenset[int]:
    """1-based positions holding a 0."""
    return frozenset((np.flatnonzero(x.array == 0) + 1).tolist())


def complement(x: BitSeq) -> BitSeq:
    return BitSeq.from_array(1 - x.array)


def concat(x: BitSeq, y: BitSeq) -> BitSeq:
    return BitSeq.from_array(np.concatenate([x.array, y.array]))


def hat(x: BitSeq) -> BitSeq:
    """``x`` followed by itself."""
    return concat(x, x)


def check(x: BitSeq) -> BitSeq:
    """``x`` followed by its complement."""
    return concat(x, complement(x))


def structure_ops(x: BitSeq) -> dict[str, BitSeq]:
    return {"complement": complement(x), "hat": hat(x), "check": check(x)}
