"""
Reconstructing codewords from traces
====================================

Run the two-step decoder on random RM(m,1) codewords and sweep the
trace budget.
"""

from rmtrace.reconstruct import (
    ReconstructionConfig,
    minimal_budget,
    plan_sample_sizes,
    run_experiment,
)

for m in (4, 5, 6):
    n = 1 << m
    ell, k = plan_sample_sizes(n)
    print(f"m={m}: planned ell={ell}, k={k}")

# exact sufficient-statistic engine: each trial draws k traces in law
cfg = ReconstructionConfig.planned(5, seed=7, engine="sufficient")
rep = run_experiment(cfg, 50)
print(rep.successes, "/", rep.trials, "decoded;", rep.step1_errors, "step-1 and",
      rep.step2_errors, "step-2 errors")

# smaller budgets: where does the decoder start to fail?
sweep = minimal_budget(4, trials=50, seed=3)
for row in sweep["rows"]:
    print(f"{row['budget']:>16s}  k={row['k']:>6d}  successes={row['successes']}")
