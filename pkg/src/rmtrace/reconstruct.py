"""Two-step reconstruction of RM(m, 1) codewords from traces at q = 1/2.

Step 1 takes a majority vote on the first symbol of the first ``ell``
traces. Step 2 averages the run counts of all ``k`` traces and returns the
codeword with the voted first symbol whose expected run count is closest.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from .bitseq import BitSeq, count_runs
from .channel import ChannelConfig, generator, sample_statistics, trace_law
from .dyadic import DyadicRational
from .errors import InvalidParameter, UnsupportedParameter
from .rmcode import RMCodebook, enumerate_codewords
from .runstats import expected_total_runs_half

MIN_M = 4
DELTA = 0.028
CHERNOFF_DENOM = 288
# stream ids inside one experiment seed
SELECT_STREAM = 1
CHANNEL_STREAM = 2
# explicit simulation is used up to this many trace symbols per trial
AUTO_EXPLICIT_CELLS = 1 << 26


def plan_sample_sizes(n: int, c: float = 2.0, delta: float = DELTA) -> tuple[int, int]:
    """Trace counts ``(ell, k)`` driving both error bounds below ``n**-c``.

    ``ell`` solves ``exp(-ell/288) <= n**-c`` and ``k`` solves
    ``2 exp(-k delta**2 / (2 n**2)) <= 2 n**-c``; both are at least 1.
    """
    if n < 2:
        raise InvalidParameter("n must be >= 2")
    if c <= 0:
        raise InvalidParameter("c must be positive")
    log_n = math.log(n)
    ell = max(1, math.ceil(CHERNOFF_DENOM * c * log_n))
    k = max(1, math.ceil(2 * c / delta**2 * n * n * log_n))
    return ell, k


def first_bit_vote(ones: int, ell: int) -> int:
    """1 iff strictly more than half of ``ell`` votes are 1."""
    return 1 if 2 * ones > ell else 0


def step1_first_bit(traces: Sequence[BitSeq], ell: int) -> int:
    if ell < 1:
        raise InvalidParameter("ell must be >= 1")
    if len(traces) < ell:
        raise InvalidParameter(f"need {ell} traces for the first-bit vote, got {len(traces)}")
    head = traces[:ell]
    if any(len(t) == 0 for t in head):
        raise InvalidParameter("first-bit vote needs non-empty traces")
    return first_bit_vote(sum(t[0] for t in head), ell)


class RunTable:
    """A codebook with the expected trace run count of every codeword.

    Exact values are kept alongside the float copies used for the nearest
    search.
    """

    def __init__(self, book: RMCodebook):
        self.book = book
        self.exact: list[DyadicRational] = [expected_total_runs_half(w) for w in book.codewords]
        self.values = np.array([float(v) for v in self.exact])
        self._groups = {b: idx for b, idx in book.first_bit_index.items()}

    @property
    def m(self) -> int:
        return self.book.m

    def candidates(self, b: int) -> np.ndarray:
        return self._groups[b]

    def min_separation(self) -> tuple[DyadicRational, tuple[int, int]]:
        """Smallest exact gap between expected runs of same-first-bit codewords."""
        best, wit = None, None
        for b in (0, 1):
            idx = self._groups[b]
            order = sorted(idx.tolist(), key=lambda i: self.exact[i])
            for i, j in zip(order, order[1:]):
                gap = self.exact[j] - self.exact[i]
                if best is None or gap < best:
                    best, wit = gap, (i, j)
        return best, wit

    def nearest(self, rbar: float, b: int) -> int:
        """Canonical index of the closest candidate; the earliest wins ties."""
        idx = self._groups[b]
        return int(idx[np.argmin(np.abs(self.values[idx] - rbar))])


@lru_cache(maxsize=16)
def run_table(m: int) -> RunTable:
    table = RunTable(enumerate_codewords(m))
    if MIN_M <= m <= 6:
        gap, _ = table.min_separation()
        assert gap >= Fraction(28, 1000), f"separation {gap} below 0.028 at m={m}"
    return table


def _check_m(m: int) -> None:
    if m < MIN_M:
        raise UnsupportedParameter(f"reconstruction is supported for m >= {MIN_M}, got {m}")


def step2_nearest(traces: Sequence[BitSeq], table: RunTable | RMCodebook, b: int) -> BitSeq:
    if not traces:
        raise InvalidParameter("no traces")
    if isinstance(table, RMCodebook):
        table = RunTable(table)
    rbar = sum(count_runs(t).total for t in traces) / len(traces)
    return table.book.codewords[table.nearest(rbar, b)]


def reconstruct(traces: Sequence[BitSeq], m: int, ell: Optional[int] = None) -> BitSeq:
    """Decode a codeword of RM(m, 1) from non-empty traces.

    ``ell`` defaults to the planned first-bit count at ``c = 2``, capped at
    the number of traces.
    """
    _check_m(m)
    if not traces:
        raise InvalidParameter("no traces")
    if any(len(t) == 0 for t in traces):
        raise InvalidParameter("traces must be non-empty")
    if ell is None:
        ell = min(plan_sample_sizes(1 << m)[0], len(traces))
    b = step1_first_bit(traces, ell)
    return step2_nearest(traces, run_table(m), b)


@dataclass(frozen=True)
class ReconstructionConfig:
    """Parameters of one Monte Carlo experiment.

    ``engine`` selects how trace statistics are produced: ``"explicit"``
    pushes every trace through the channel, ``"sufficient"`` draws the
    first-symbol and run-count tallies from their exact joint law, and
    ``"auto"`` uses explicit simulation while ``k * n`` stays below
    ``AUTO_EXPLICIT_CELLS``.
    """

    m: int
    ell: int
    k: int
    seed: int = 0
    q: float = 0.5
    engine: str = "auto"

    def __post_init__(self):
        _check_m(self.m)
        if self.q != 0.5:
            raise UnsupportedParameter("reconstruction is defined for q = 1/2 only")
        if self.ell < 1 or self.k < self.ell:
            raise InvalidParameter("need 1 <= ell <= k")
        if self.engine not in ("auto", "explicit", "sufficient"):
            raise InvalidParameter(f"unknown engine {self.engine!r}")

    @classmethod
    def planned(cls, m: int, c: float = 2.0, seed: int = 0, **kw) -> "ReconstructionConfig":
        ell, k = plan_sample_sizes(1 << m, c)
        return cls(m, ell, k, seed, **kw)

    @property
    def resolved_engine(self) -> str:
        if self.engine != "auto":
            return self.engine
        return "explicit" if self.k << self.m <= AUTO_EXPLICIT_CELLS else "sufficient"


@dataclass
class TrialRecord:
    trial: int
    codeword: str
    decoded: str
    first_bit_votes: int
    first_bit: int
    rbar: float
    expected_runs: float
    channel_uses: int
    outcome: str  # "success", "step1", "step2"


@dataclass
class ExperimentReport:
    trials: int
    successes: int
    step1_errors: int
    step2_errors: int
    mean_abs_dev: float
    channel_uses: int
    config: dict
    wall_time: float = 0.0
    rows: list[TrialRecord] = field(default_factory=list, repr=False)

    def as_dict(self, with_rows: bool = False, with_time: bool = True) -> dict:
        out = {
            "trials": self.trials,
            "successes": self.successes,
            "step1_errors": self.step1_errors,
            "step2_errors": self.step2_errors,
            "mean_abs_dev": self.mean_abs_dev,
            "channel_uses": self.channel_uses,
            "config": self.config,
        }
        if with_time:
            out["wall_time"] = self.wall_time
        if with_rows:
            out["rows"] = [asdict(r) for r in self.rows]
        return out


@lru_cache(maxsize=4096)
def _law(word: BitSeq) -> tuple[np.ndarray, np.ndarray]:
    joint = trace_law(word, 0.5, nonempty=True)
    joint = joint / joint.sum()
    runs = joint.sum(axis=0)
    return joint.ravel(), runs / runs.sum()


def _tallies(word: BitSeq, cfg: ReconstructionConfig, trial: int) -> tuple[int, int, int]:
    """Votes for 1 among the first ``ell`` traces, run total over ``k``, channel uses."""
    n = len(word)
    if cfg.resolved_engine == "explicit":
        stats = sample_statistics(word, ChannelConfig(0.5, cfg.seed, CHANNEL_STREAM), cfg.k,
                                  draw_index=trial)
        ones = int(np.count_nonzero(stats.first[: cfg.ell] == 1))
        return ones, int(stats.runs.sum(dtype=np.int64)), stats.channel_uses
    joint, marginal = _law(word)
    rng = generator(cfg.seed, CHANNEL_STREAM, trial)
    r = np.arange(n + 1)
    head = rng.multinomial(cfg.ell, joint).reshape(2, n + 1)
    tail = rng.multinomial(cfg.k - cfg.ell, marginal)
    total = int(head.sum(axis=0) @ r) + int(tail @ r)
    rejected = int(rng.negative_binomial(cfg.k, 1.0 - 0.5**n))
    return int(head[1].sum()), total, cfg.k + rejected


def run_trial(cfg: ReconstructionConfig, trial: int, selection: Union[str, BitSeq] = "random",
              table: Optional[RunTable] = None) -> TrialRecord:
    table = table or run_table(cfg.m)
    book = table.book
    if isinstance(selection, BitSeq):
        if selection not in book:
            raise InvalidParameter("fixed codeword is not in RM(m,1)")
        idx = book.index(selection)
    elif selection == "all":
        idx = trial % len(book)
    elif selection == "random":
        idx = int(generator(cfg.seed, SELECT_STREAM, trial).integers(len(book)))
    else:
        raise InvalidParameter(f"unknown codeword selection {selection!r}")
    word = book.codewords[idx]
    ones, runs_total, uses = _tallies(word, cfg, trial)
    b = first_bit_vote(ones, cfg.ell)
    rbar = runs_total / cfg.k
    decoded = table.nearest(rbar, b)
    if decoded == idx:
        outcome = "success"
    elif b != word[0]:
        outcome = "step1"
    else:
        outcome = "step2"
    return TrialRecord(trial, str(word), str(book.codewords[decoded]), ones, b, rbar,
                       float(table.values[idx]), uses, outcome)


def run_experiment(cfg: ReconstructionConfig, trials: int,
                   selection: Union[str, BitSeq] = "random", workers: int = 1,
                   first_trial: int = 0) -> ExperimentReport:
    """Run independent reconstruction trials and tally the outcomes.

    Trial ``t`` draws its codeword and traces from streams keyed by
    ``(cfg.seed, t)``, so the report does not depend on ``workers``.
    """
    if trials < 0:
        raise InvalidParameter("trials must be >= 0")
    start = time.perf_counter()
    table = run_table(cfg.m)
    ids = range(first_trial, first_trial + trials)
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda t: run_trial(cfg, t, selection, table), ids))
    else:
        rows = [run_trial(cfg, t, selection, table) for t in ids]
    outcomes = [r.outcome for r in rows]
    config = asdict(cfg)
    config["engine"] = cfg.resolved_engine
    config["selection"] = selection if isinstance(selection, str) else str(selection)
    return ExperimentReport(
        trials=trials,
        successes=outcomes.count("success"),
        step1_errors=outcomes.count("step1"),
        step2_errors=outcomes.count("step2"),
        mean_abs_dev=float(np.mean([abs(r.rbar - r.expected_runs) for r in rows])) if rows else 0.0,
        channel_uses=sum(r.channel_uses for r in rows),
        config=config,
        wall_time=time.perf_counter() - start,
        rows=rows,
    )


def budget_candidates(n: int) -> dict[str, int]:
    """Trace budgets ``n ln n``, ``n^2 ln n / 100``, ``n^2 ln n / 10``, ``n^2 ln n``."""
    ln = math.log(n)
    return {
        "n ln n": math.ceil(n * ln),
        "n^2 ln n / 100": math.ceil(n * n * ln / 100),
        "n^2 ln n / 10": math.ceil(n * n * ln / 10),
        "n^2 ln n": math.ceil(n * n * ln),
    }


def minimal_budget(m: int, trials: int = 100, seed: int = 0, threshold: int = 95,
                   c: float = 2.0, engine: str = "auto", workers: int = 1) -> dict:
    """Smallest candidate budget whose success count reaches ``threshold``.

    The first-bit count is the planned ``ell`` capped at the budget.
    """
    n = 1 << m
    ell_plan, _ = plan_sample_sizes(n, c)
    rows = []
    found = None
    for label, k in budget_candidates(n).items():
        cfg = ReconstructionConfig(m, min(ell_plan, k), k, seed, engine=engine)
        rep = run_experiment(cfg, trials, "random", workers=workers)
        rows.append({"budget": label, "k": k, "ell": cfg.ell, "successes": rep.successes,
                     "step1_errors": rep.step1_errors, "step2_errors": rep.step2_errors})
        if found is None and rep.successes >= threshold:
            found = {"budget": label, "k": k}
    return {"m": m, "trials": trials, "threshold": threshold, "rows": rows, "minimal": found}
