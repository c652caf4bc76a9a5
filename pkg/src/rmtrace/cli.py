"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys
import time
from fractions import Fraction

from . import errors
from .bitseq import BitSeq, count_runs
from .channel import ChannelConfig, sample_batch
from .reconstruct import (ReconstructionConfig, minimal_budget, plan_sample_sizes, reconstruct,
                          run_experiment)
from .report import ReportEnvelope, UsageError, render_report
from .rmcode import encode, enumerate_codewords
from .runstats import coefficients, expected_runs
from .verify import check_conditions, check_table1

THREADS_ENV = "RMTRACE_THREADS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _bits(text: str) -> BitSeq:
    try:
        return BitSeq(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _seed(args, err) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(63)
        print(f"seed: {args.seed}", file=err)
    return args.seed


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = _Parser(prog="rmtrace", description=__doc__, formatter_class=fmt)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    s = sub.add_parser("codewords", help="list RM(m,1) codewords in canonical order",
                       formatter_class=fmt)
    s.add_argument("--m", type=int, required=True, help="code parameter, n = 2^m")
    s.add_argument("--first-bit", type=int, choices=(0, 1), default=None,
                   help="only codewords starting with this bit")

    s = sub.add_parser("encode", help="evaluate u0 + u1 x1 + ... + um xm", formatter_class=fmt)
    s.add_argument("--m", type=int, required=True, help="number of variables")
    s.add_argument("--u0", type=int, choices=(0, 1), default=0, help="constant coefficient")
    s.add_argument("--u", type=str, default=None, help="linear coefficients as a bit string")

    s = sub.add_parser("trace", help="sample traces through the deletion channel",
                       formatter_class=fmt)
    s.add_argument("--x", type=_bits, required=True, help="input bit string")
    s.add_argument("--q", type=_rational, default=Fraction(1, 2), help="deletion probability")
    s.add_argument("--k", type=int, default=1, help="number of traces")
    s.add_argument("--seed", type=int, default=None, help="random seed (generated if omitted)")
    s.add_argument("--nonempty", action="store_true", help="reject empty traces")
    s.add_argument("--mask", action="store_true", help="also print each deletion mask")

    s = sub.add_parser("runs", help="count runs of a bit string", formatter_class=fmt)
    s.add_argument("--x", type=_bits, required=True, help="bit string")

    s = sub.add_parser("expected-runs", help="expected runs in one trace", formatter_class=fmt)
    s.add_argument("--x", type=_bits, required=True, help="bit string")
    s.add_argument("--q", type=_rational, default=Fraction(1, 2),
                   help="deletion probability as p/q or decimal")

    s = sub.add_parser("coeffs", help="alpha, beta, gamma, delta of a sequence",
                       formatter_class=fmt)
    s.add_argument("--x", type=_bits, required=True, help="bit string")

    s = sub.add_parser("verify-lemma", help="scan RM(m,1) pairs for the separation conditions",
                       formatter_class=fmt)
    s.add_argument("--m", type=int, required=True, help="code parameter")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--full", action="store_true", help="scan every pair")
    g.add_argument("--sample", type=int, default=None, help="scan this many random pairs")
    s.add_argument("--first-bit", type=int, choices=(0, 1), default=0, help="codeword half")
    s.add_argument("--seed", type=int, default=0, help="seed for pair sampling")
    s.add_argument("--format", choices=("json", "csv"), default="json", help="output format")

    s = sub.add_parser("check-table1", help="compare RM(4,1) coefficients with the table",
                       formatter_class=fmt)
    s.add_argument("--format", choices=("json", "text"), default="json", help="output format")

    s = sub.add_parser("reconstruct", help="reconstruct a codeword from traces",
                       formatter_class=fmt)
    s.add_argument("--m", type=int, required=True, help="code parameter (>= 4)")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--traces", type=str, help="file with one trace per line")
    g.add_argument("--x", type=_bits, help="codeword to sample traces from")
    s.add_argument("--k", type=int, default=None, help="traces to sample (default: planned)")
    s.add_argument("--ell", type=int, default=None, help="traces used for the first-bit vote")
    s.add_argument("--seed", type=int, default=None, help="random seed (generated if omitted)")

    s = sub.add_parser("experiment", help="Monte Carlo reconstruction trials",
                       formatter_class=fmt)
    s.add_argument("--m", type=int, required=True, help="code parameter (>= 4)")
    s.add_argument("--trials", type=int, default=100, help="number of trials")
    s.add_argument("--k", type=int, default=None, help="traces per trial")
    s.add_argument("--ell", type=int, default=None, help="first-bit vote traces per trial")
    s.add_argument("--plan-c", type=float, default=2.0,
                   help="target exponent for the sample-size planner")
    s.add_argument("--seed", type=int, default=None, help="random seed (generated if omitted)")
    s.add_argument("--selection", default="random",
                   help="'random', 'all', or a fixed codeword bit string")
    s.add_argument("--engine", choices=("auto", "explicit", "sufficient"), default="auto",
                   help="trace simulation engine")
    s.add_argument("--workers", type=int, default=_default_workers(),
                   help=f"worker threads (env {THREADS_ENV})")
    s.add_argument("--min-budget", action="store_true",
                   help="also search the candidate budgets for 95%% success")
    s.add_argument("--out", type=str, default=None, help="write the JSON report here")
    s.add_argument("--csv", type=str, default=None, help="write per-trial rows as CSV here")
    return p


def _emit(text: str, out) -> None:
    out.write(text)


def dispatch(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        return _run(args, argv, out, err)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, errors.InvalidParameter, errors.InvalidFormat,
            errors.ResourceLimit, errors.ChannelDegenerate) as exc:
        print(f"error: {exc}", file=err)
        return 2


def _run(args, argv, out, err) -> int:
    cmd = args.command

    if cmd == "codewords":
        book = enumerate_codewords(args.m)
        words = book.codewords if args.first_bit is None else book.with_first_bit(args.first_bit)
        _emit("".join(f"{w}\n" for w in words), out)
        return 0

    if cmd == "encode":
        u = [int(c) for c in (args.u or "0" * args.m)]
        _emit(f"{encode(args.m, args.u0, u)}\n", out)
        return 0

    if cmd == "trace":
        seed = _seed(args, err)
        q = args.q
        cfg = ChannelConfig(q if q != Fraction(1, 2) else 0.5, seed)
        batch = sample_batch(args.x, cfg, args.k, nonempty_only=args.nonempty,
                             keep_masks=args.mask)
        for i, t in enumerate(batch.traces):
            line = str(t)
            if args.mask:
                line = f"{line}\t{batch.masks[i].mask}"
            _emit(line + "\n", out)
        return 0

    if cmd == "runs":
        rc = count_runs(args.x)
        _emit(render_report({"zeros": rc.zeros, "ones": rc.ones, "total": rc.total}, "text"), out)
        return 0

    if cmd == "expected-runs":
        er = expected_runs(args.x, args.q)
        _emit(render_report({"zeros": er.zeros, "ones": er.ones, "total": er.total}, "text"), out)
        return 0

    if cmd == "coeffs":
        _emit(render_report(coefficients(args.x).as_dict(), "text"), out)
        return 0

    if cmd == "check-table1":
        res = check_table1()
        payload = {"passed": res.passed, "result": res.summary(), "matches": res.matches,
                   "total": res.total, "diffs": res.diffs}
        if args.format == "json":
            _emit(ReportEnvelope(argv, payload).to_json(), out)
        else:
            _emit(render_report(payload, "text"), out)
        return 0 if res.passed else 1

    if cmd == "verify-lemma":
        rep = check_conditions(args.m, first_bit=args.first_bit, sample=args.sample,
                               full=args.full, seed=args.seed)
        if args.format == "json":
            _emit(ReportEnvelope(argv, rep.as_dict(), seeds={"pairs": args.seed}).to_json(), out)
        else:
            _emit(render_report(rep.rows(), "csv"), out)
        return 0 if rep.passed else 1

    if cmd == "reconstruct":
        m = args.m
        if args.traces:
            with open(args.traces) as fh:
                traces = [BitSeq(line.strip()) for line in fh if line.strip()]
            uses = None
        else:
            seed = _seed(args, err)
            k = args.k if args.k is not None else plan_sample_sizes(1 << m)[1]
            batch = sample_batch(args.x, ChannelConfig(0.5, seed), k, nonempty_only=True)
            traces, uses = batch.traces, batch.channel_uses
        decoded = reconstruct(traces, m, ell=args.ell)
        payload = {"decoded": str(decoded), "k": len(traces), "channel_uses": uses}
        if args.x is not None:
            payload["success"] = decoded == args.x
        _emit(ReportEnvelope(argv, payload, seeds={"channel": args.seed}).to_json(), out)
        return 0

    if cmd == "experiment":
        seed = _seed(args, err)
        if (args.k is None) != (args.ell is None):
            plan_ell, plan_k = plan_sample_sizes(1 << args.m, args.plan_c)
            k = args.k if args.k is not None else plan_k
            ell = args.ell if args.ell is not None else min(plan_ell, k)
        elif args.k is None:
            ell, k = plan_sample_sizes(1 << args.m, args.plan_c)
        else:
            ell, k = args.ell, args.k
        selection = args.selection
        if selection not in ("random", "all"):
            selection = _bits(selection)
        cfg = ReconstructionConfig(args.m, ell, k, seed, engine=args.engine)
        t0 = time.perf_counter()
        rep = run_experiment(cfg, args.trials, selection, workers=args.workers)
        payload = rep.as_dict(with_time=False)
        if args.min_budget:
            payload["min_budget"] = minimal_budget(args.m, args.trials, seed,
                                                   c=args.plan_c, engine=args.engine,
                                                   workers=args.workers)
        env = ReportEnvelope(argv, payload, seeds={"experiment": seed},
                             timing={"wall_time": time.perf_counter() - t0})
        text = env.to_json()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            _emit(text, out)
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write(render_report(rep.as_dict(with_rows=True, with_time=False), "csv"))
        return 0

    raise UsageError(f"unknown command {cmd!r}")


def main() -> None:
    sys.exit(dispatch())
