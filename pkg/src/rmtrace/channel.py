"""The i.i.d. deletion channel.

Randomness is drawn from Philox streams keyed by ``(seed, stream_id,
draw_index)``, so any batch can be regenerated on its own, on any worker,
without replaying earlier draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .bitseq import BitSeq
from .errors import ChannelDegenerate, InvalidParameter

# masks are drawn in chunks of 1024, 2048, ... rows up to CHUNK_CELLS symbols;
# the schedule never depends on the requested count, so shorter requests
# see a prefix of longer ones
CHUNK_CELLS = 1 << 22
FIRST_CHUNK_ROWS = 1024


@dataclass(frozen=True)
class ChannelConfig:
    """Deletion probability plus the key of the random stream."""

    q: float | Fraction = 0.5
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.q <= 1:
            raise InvalidParameter(f"q must lie in [0, 1], got {self.q}")


@dataclass(frozen=True)
class DeletionMask:
    """A length-n sequence with 1 marking a deleted position."""

    mask: BitSeq


def generator(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for the stream ``(seed, *key)``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def apply_mask(x: BitSeq, omega: DeletionMask | BitSeq) -> BitSeq:
    """Keep the symbols of ``x`` at positions where the mask is 0."""
    mask = omega.mask if isinstance(omega, DeletionMask) else omega
    if len(mask) != len(x):
        raise InvalidParameter(f"mask length {len(mask)} != sequence length {len(x)}")
    return BitSeq.from_array(x.array[mask.array == 0])


def _draw_deleted(rng: np.random.Generator, rows: int, n: int, q) -> np.ndarray:
    # drawn position-major; the (rows, n) result is a transposed view
    if q == 0.5:
        raw = rng.integers(0, 256, size=(n, (rows + 7) // 8), dtype=np.uint8)
        cols = np.unpackbits(raw, axis=1, count=rows).view(bool)
    else:
        cols = rng.random((n, rows)) < float(q)
    return cols.T


def _chunks(rng, n: int, q):
    cap = max(FIRST_CHUNK_ROWS, CHUNK_CELLS // max(n, 1))
    rows = FIRST_CHUNK_ROWS
    while True:
        yield _draw_deleted(rng, rows, n, q)
        rows = min(2 * rows, cap)


def sample_trace(x: BitSeq, cfg: ChannelConfig, draw_index: int = 0,
                 return_mask: bool = False):
    """One trace of ``x``; the same ``(cfg, draw_index)`` gives the same trace."""
    rng = generator(cfg.seed, cfg.stream_id, draw_index)
    deleted = _draw_deleted(rng, 1, len(x), cfg.q)[0]
    trace = BitSeq.from_array(x.array[~deleted])
    if return_mask:
        return trace, DeletionMask(BitSeq.from_array(deleted))
    return trace


@dataclass
class TraceBatch:
    traces: list[BitSeq]
    channel_uses: int
    masks: Optional[list[DeletionMask]] = field(default=None, repr=False)


def _check_nonempty_possible(x: BitSeq, q) -> None:
    if len(x) == 0 or q == 1:
        raise ChannelDegenerate("the channel never outputs a non-empty trace here")


def sample_batch(x: BitSeq, cfg: ChannelConfig, k: int, nonempty_only: bool = False,
                 draw_index: int = 0, keep_masks: bool = False,
                 max_channel_uses: Optional[int] = None) -> TraceBatch:
    """Draw ``k`` traces (``k`` non-empty traces when ``nonempty_only`` is set).

    Empty traces are rejected and sampling continues; ``channel_uses``
    counts every channel invocation including rejected ones.
    """
    if k < 0:
        raise InvalidParameter("k must be >= 0")
    if k == 0:
        return TraceBatch([], 0, [] if keep_masks else None)
    if nonempty_only:
        _check_nonempty_possible(x, cfg.q)
    budget = max_channel_uses if max_channel_uses is not None else 1000 * k + 10**6
    rng = generator(cfg.seed, cfg.stream_id, draw_index)
    n = len(x)
    xa = x.array
    traces: list[BitSeq] = []
    masks: list[DeletionMask] = []
    uses = 0
    chunks = _chunks(rng, n, cfg.q)
    while len(traces) < k:
        deleted = next(chunks)
        for row in deleted:
            uses += 1
            kept = ~row
            if nonempty_only and not kept.any():
                if uses >= budget:
                    raise ChannelDegenerate(f"no non-empty trace within {budget} channel uses")
                continue
            traces.append(BitSeq.from_array(xa[kept]))
            if keep_masks:
                masks.append(DeletionMask(BitSeq.from_array(row)))
            if len(traces) == k:
                break
    return TraceBatch(traces, uses, masks if keep_masks else None)


def run_statistics(x_arr: np.ndarray, deleted: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First symbol and total run count of each trace encoded by a mask row.

    Parameters
    ----------
    x_arr : (n,) uint8
    deleted : (B, n) bool

    Returns
    -------
    first : (B,) int8
        First trace symbol, or -1 for an empty trace.
    runs : (B,) int32
        Total number of runs in each trace.
    """
    B, n = deleted.shape
    # sweep positions left to right, tracking the last kept symbol per trace
    keep = np.asfortranarray(~deleted)
    last = np.full(B, -1, np.int8)
    first = np.full(B, -1, np.int8)
    runs = np.zeros(B, np.int32)
    for j, c in enumerate(x_arr.tolist()):
        kj = keep[:, j]
        runs += kj & (last != c)
        np.copyto(first, np.int8(c), where=kj & (first < 0))
        np.copyto(last, np.int8(c), where=kj)
    return first, runs


@dataclass
class TraceStatistics:
    """Per-trace first symbols and run counts of a batch of non-empty traces."""

    first: np.ndarray
    runs: np.ndarray
    channel_uses: int


def sample_statistics(x: BitSeq, cfg: ChannelConfig, k: int, draw_index: int = 0,
                      max_channel_uses: Optional[int] = None) -> TraceStatistics:
    """Statistics of ``k`` non-empty traces, without materializing them.

    Uses the same random stream as ``sample_batch(..., nonempty_only=True)``
    with the same ``draw_index``, so the statistics match those traces.
    """
    if k < 0:
        raise InvalidParameter("k must be >= 0")
    if k == 0:
        return TraceStatistics(np.zeros(0, np.int8), np.zeros(0, np.int32), 0)
    _check_nonempty_possible(x, cfg.q)
    budget = max_channel_uses if max_channel_uses is not None else 1000 * k + 10**6
    rng = generator(cfg.seed, cfg.stream_id, draw_index)
    n = len(x)
    xa = x.array
    firsts, runs = [], []
    got = 0
    uses = 0
    chunks = _chunks(rng, n, cfg.q)
    while got < k:
        deleted = next(chunks)
        rows = deleted.shape[0]
        first, r = run_statistics(xa, deleted)
        ok = np.flatnonzero(first >= 0)
        need = k - got
        if ok.size >= need:
            cut = ok[need - 1]
            uses += int(cut) + 1
            ok = ok[:need]
        else:
            uses += rows
            if uses >= budget:
                raise ChannelDegenerate(f"no non-empty trace within {budget} channel uses")
        firsts.append(first[ok])
        runs.append(r[ok])
        got += ok.size
    return TraceStatistics(np.concatenate(firsts), np.concatenate(runs), uses)


def trace_law(x: BitSeq, q=0.5, nonempty: bool = True) -> np.ndarray:
    """Exact joint law of (first symbol, total runs) of one trace.

    Returns an array ``P`` of shape ``(2, n + 1)`` with ``P[f, r]`` the
    probability that a trace starts with ``f`` and has ``r`` runs. With
    ``nonempty`` the law is conditioned on the trace being non-empty.
    """
    n = len(x)
    q = float(q)
    p = 1.0 - q
    empty = 1.0
    # state[f, s, r]: first symbol f, last kept symbol s, r runs so far
    state = np.zeros((2, 2, n + 2))
    for c in x.array.tolist():
        kept = np.zeros_like(state)
        kept[:, c, 1:] += state[:, c, 1:]
        kept[:, c, 1:] += state[:, 1 - c, :-1]
        kept[c, c, 1] += empty
        state = q * state + p * kept
        empty *= q
    law = state.sum(axis=1)[:, : n + 1]
    if nonempty:
        if empty >= 1.0:
            raise ChannelDegenerate("the channel never outputs a non-empty trace here")
        law = law / (1.0 - empty)
    return law


def nonempty_probability(x: BitSeq, q=0.5) -> float:
    return 1.0 - float(q) ** len(x)
