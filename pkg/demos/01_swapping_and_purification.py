"""
Swapping and purification of isotropic pairs
============================================

Every link in the network model is an isotropic two-qubit state, so a single
number, its fidelity, describes it.  This walk-through shows how fidelity
degrades along a chain of swaps and when one round of purification helps.
"""

# %%
# Swapping two links multiplies their Werner parameters.
from mpep.quantum import purify, swap_chain, swap_pair, useful_window, is_purification_useful

print("swap(0.95, 0.95) =", swap_pair(0.95, 0.95))

# A chain of equal links loses fidelity geometrically with its length.
for l in (1, 2, 4, 8, 16):
    print(f"{l:2d} links of 0.95 -> {swap_chain([0.95] * l):.4f}")

# %%
# Purifying two equal pairs always helps, at the price of a success probability.
for f in (0.6, 0.75, 0.9):
    r = purify(f, f)
    print(f"purify({f}, {f}) -> f={r.output_fidelity:.4f} with p={r.success_probability:.3f}")

# %%
# Unequal pairs only help inside a window around f1.
w = useful_window(0.8)
print(f"partners of 0.8 that help: [{w.lower:.4f}, {w.upper:.4f}]")
print("0.8 with 0.75:", is_purification_useful(0.8, 0.75))
print("0.8 with 0.70:", is_purification_useful(0.8, 0.70))

# %%
# The closed forms agree with a brute-force 16x16 density-matrix calculation.
from mpep import oracle

p, f, _ = oracle.purify_outcome(0.8, 0.75)
print("oracle:", f, p)
print("closed:", purify(0.8, 0.75))
