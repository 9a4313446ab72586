"""
Random network campaign
=======================

Sample source/destination pairs on a random graph and compare the single
path protocol, two-path purification, and the criteria-gated choice.  The
full-size run (10^4 nodes, 10^4 pairs) takes about a minute; pass ``small``
to try a reduced network first.
"""

# %%
import sys

from mpep.network import find_mad_paths, nine_node_example
from mpep.simulator import SimulationConfig, run_campaign

# Greedy edge-disjoint paths on the nine-node example (labels start at 1).
for p in find_mad_paths(nine_node_example(), 0, 4, 3):
    print([v + 1 for v in p.nodes])

# %%
if "small" in sys.argv:
    cfg = SimulationConfig(num_nodes=2000, num_edges=5000, seed=1, num_samples=2000)
else:
    cfg = SimulationConfig(num_nodes=10_000, num_edges=25_000, seed=1, num_samples=10_000)

report = run_campaign(cfg)
print("\n".join(report.summary_lines()))
print("discarded disconnected draws:", report.skipped_pairs)

# %%
# The same report as CSV, ready for plotting elsewhere.
print(report.to_csv())
