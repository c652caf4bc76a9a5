"""
Checking the separation conditions exactly
==========================================

The conditions behind the reconstruction guarantee are verified over all
codeword pairs with exact dyadic arithmetic.
"""

from rmtrace.verify import check_conditions, check_table1, tail_sum

print(check_table1().summary())

for m in (2, 3, 4, 5, 6):
    rep = check_conditions(m, full=True)
    scope = "" if rep.within_guarantee else "  (outside guarantee)"
    print(f"m={m}: {'PASS' if rep.passed else 'FAIL'}{scope}")
    for name, mg in rep.margins.items():
        print(f"   {name:10s} value={mg.value}  bound={mg.bound}  ok={mg.passed}")

# the finite tail sum approaches 17/2^15 from below
for n in (32, 64, 128):
    print(n, float(tail_sum(n)))
