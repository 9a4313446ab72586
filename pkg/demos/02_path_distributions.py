"""
Distribution of path fidelity and path probability
==================================================

Edge fidelities drawn from U(f_min, 1) produce a piecewise density of path
fidelity after swapping.  We tabulate the curves and compare them with
sampled chains.
"""

# %%
import numpy as np

from mpep.stats import PathFidelityPdf, PathProbabilityPdf

# Weight moves towards low fidelity as the path grows.
for l in range(1, 7):
    q = PathFidelityPdf(l, 0.5)
    print(f"l={l}: support starts at {q.support[0]:.4f}, P(f > 0.5) = {q.mass(0.5, 1.0):.3f}")

# %%
# Narrow edge distributions keep long paths entangled.
for l in (4, 8, 12):
    q = PathFidelityPdf(l, 0.9)
    print(f"f_min=0.9, l={l:2d}: P(f > 0.5) = {q.mass(0.5, 1.0):.4f}")

# %%
# Compare the analytic CDF with sampled chains of swaps.
rng = np.random.default_rng(0)
q = PathFidelityPdf(3, 0.5)
edges = rng.uniform(0.5, 1.0, size=(200_000, 3))
samples = 0.25 + 0.75 * np.prod((4 * edges - 1) / 3, axis=1)
for x in (0.4, 0.5, 0.6, 0.7, 0.8):
    print(f"P(f <= {x}) analytic {q.cdf(x)[0]:.4f}  sampled {np.mean(samples <= x):.4f}")

# %%
# Path probability behaves the same way.
p = PathProbabilityPdf(4, 0.5)
grid = np.linspace(*p.support, 6)
print(np.column_stack([grid, p(grid)]))
