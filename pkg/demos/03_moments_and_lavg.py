"""
Mean path fidelity and the entangled path length
================================================

Closed forms for the mean and spread of path fidelity, and the longest path
that is still entangled on average.
"""

# %%
from mpep.stats import (
    UniformEdgeDistribution,
    average_entangled_path_length,
    mean_path_fidelity,
    std_path_fidelity,
)

for fbar in (0.75, 0.85, 0.95):
    edge = UniformEdgeDistribution.from_mean(fbar)
    row = [f"{mean_path_fidelity(l, edge):.3f}" for l in (1, 5, 10, 15, 20)]
    print(f"mean edge fidelity {fbar}: {row}  l_avg={average_entangled_path_length(edge)}")

# %%
# The spread first grows with l (more random edges), then shrinks as every
# path collapses towards the fully mixed value 1/4.
edge = UniformEdgeDistribution.from_mean(0.85)
print([round(std_path_fidelity(l, edge), 4) for l in range(1, 13)])

# %%
# For narrow edge laws the spread scales like sqrt(l).
edge = UniformEdgeDistribution(0.98)
for l in (1, 4, 9):
    print(l, std_path_fidelity(l, edge), std_path_fidelity(l, edge, approx=True))
