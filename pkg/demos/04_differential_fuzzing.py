"""
Checking the tools against each other
=====================================

Random logics and sequents are thrown at the oracle, the prover in all
six calculi, the checker, the translations and cut elimination. Any
disagreement is shrunk to a small reproducer.
"""
from nmcalc import calculi
from nmcalc.fuzz import FuzzConfig, run_fuzz

cfg = FuzzConfig(seed=1, instances=100, max_values=3)
report = run_fuzz(cfg)
print(report.summary())

# %%
# Break the shift rule on purpose: equal labels allowed, distinct ones refused
original = calculi.labels_differ
calculi.labels_differ = lambda k1, k2: k1 == k2
try:
    broken = run_fuzz(FuzzConfig(seed=1, instances=20, max_values=2, cut_elimination=False))
finally:
    calculi.labels_differ = original
print(broken.summary())
for d in broken.discrepancies[:1]:
    print(d.reproducer())
