"""
Hash-tree workload scaling
==========================

Every depth step of the schedule builds the same total number of nodes, and
raising ``n`` by two adds a step while quadrupling the trees per step, so the
runtime grows roughly as ``2**n`` times the number of steps.
"""

# %%
import sys

from runbench.measure import ExecutionVariant, MeasurementProtocol, run_benchmark
from runbench.report import build_report, to_markdown
from runbench.stats import summarize
from runbench.workloads import mtree

# The output is fully determined by n
mtree.run(6)

# %%
protocol = MeasurementProtocol(warmups=1, iterations=5)
sets = []
for n in (8, 10, 12, 14):
    v = ExecutionVariant(f"mtree {n}", [sys.executable, "-m", "runbench.workloads.mtree", str(n)])
    sets.append(run_benchmark(v, protocol))
print(to_markdown(build_report("Hash-tree workload by n", sets)))

# %%
means = [summarize(s).mean for s in sets]
for (a, b), s in zip(zip(means, means[1:]), sets[1:]):
    print(f"{s.variant_name}: {b / a:.1f}x the previous n")
print(f"n=14 vs n=10: {means[3] / means[1]:.1f}x")
