"""
The first-order Reed-Muller codebook
====================================

Enumerate RM(m,1), check the doubling construction and look at how
well expected run counts separate the codewords.
"""

import numpy as np

from rmtrace import enumerate_codewords
from rmtrace.bitseq import check, hat
from rmtrace.reconstruct import run_table

book = enumerate_codewords(4)
print(book.n, "bits,", len(book.codewords), "codewords")
for x in book.codewords[:4]:
    print(x)

# every codeword of RM(m+1,1) is x||x or x||~x for x in RM(m,1)
doubled = {hat(x) for x in book.codewords} | {check(x) for x in book.codewords}
print("doubling reproduces RM(5,1):", doubled == set(enumerate_codewords(5).codewords))

# expected total runs, sorted per first bit
for m in (4, 5, 6):
    tab = run_table(m)
    gap, (i, j) = tab.min_separation()
    print(f"m={m}: smallest gap {float(gap):.5f} between codewords {i} and {j}")
    vals = np.sort(tab.values)
    print(f"   expected runs span {vals[0]:.3f} .. {vals[-1]:.3f}")
