"""Trace reconstruction of first-order Reed-Muller codewords from run statistics."""

__version__ = "0.1.0"

from .bitseq import BitSeq, RunCounts, check, complement, concat, cosupport, count_runs, hat, support
from .channel import ChannelConfig, DeletionMask, apply_mask, sample_batch, sample_trace
from .dyadic import DyadicRational
from .rmcode import RMCodebook, encode, enumerate_codewords
from .runstats import CoefficientSet, ExpectedRuns, an_bn, coefficient_recursion, coefficients, expected_runs
from .reconstruct import ReconstructionConfig, plan_sample_sizes, reconstruct, run_experiment

__all__ = [
    "BitSeq", "RunCounts", "count_runs", "support", "cosupport", "complement", "concat", "hat",
    "check", "DyadicRational", "encode", "enumerate_codewords", "RMCodebook", "ChannelConfig",
    "DeletionMask", "apply_mask", "sample_trace", "sample_batch", "expected_runs", "coefficients",
    "coefficient_recursion", "an_bn", "CoefficientSet", "ExpectedRuns", "plan_sample_sizes",
    "reconstruct", "run_experiment", "ReconstructionConfig",
]
