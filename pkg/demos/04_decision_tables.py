"""
When is two-path purification worth it?
=======================================

Two statistical tests decide from path lengths alone: the expected purified
fidelity must beat the single path (fidelity criterion), and both paths must
be up within the memory lifetime (availability criterion).
"""

# %%
from mpep.stats import CriteriaConfig, criterion_availability, criterion_fidelity, decision_tables

r = criterion_fidelity(6, 1, 0.9)
print(f"l0=6, d=1: purified {r.lhs:.4f} vs single path {r.rhs:.4f} -> {r.satisfied}")
r = criterion_availability(5, 1, 0.7)
print(f"l0=5, d=1: waiting-time gap {r.lhs:.3f} vs memory time {r.rhs:.3f} -> {r.satisfied}")

# %%
# Tables over l0 = 1..10 and d = 0..5 (rows l0, columns d).
for f_min in (0.9, 0.6):
    fid, av = decision_tables(CriteriaConfig(f_min, 0.7), range(1, 11), range(0, 6))
    print(f"f_min={f_min}, both criteria:")
    for l0, row in zip(fid.l0_values, (fid & av).entries.astype(int)):
        print(f"  l0={l0:2d}", *row)
