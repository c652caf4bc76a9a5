"""
Expected run counts under the deletion channel
==============================================

Compare the exact expected number of runs with a Monte Carlo estimate.
"""

from fractions import Fraction

import numpy as np

from rmtrace import BitSeq, ChannelConfig, count_runs, expected_runs, sample_batch
from rmtrace.runstats import coefficients

# a short input and its exact expectation at q = 1/2
x = BitSeq("0110100110010110")
er = expected_runs(x, Fraction(1, 2))
print("E[R0] =", er.zeros, " E[R1] =", er.ones, " total =", er.total)

# the four pair-sum coefficients behind it
print(coefficients(x).as_dict())

# other deletion probabilities give plain rationals
for q in (Fraction(1, 4), Fraction(3, 4)):
    print(f"q={q}:", expected_runs(x, q).total)

# empirical check with 20000 traces
batch = sample_batch(x, ChannelConfig(0.5, seed=1), 20000)
runs = np.array([count_runs(t).total for t in batch.traces])
print(f"sample mean {runs.mean():.4f} +- {runs.std() / np.sqrt(len(runs)):.4f}")
print(f"exact       {float(er.total):.4f}")
