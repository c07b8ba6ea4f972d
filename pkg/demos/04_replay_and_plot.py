"""
Regenerating reports from a JSON export
=======================================

A JSON export carries the raw samples, so tables and boxplots can be rebuilt
later without running anything again. Replays are byte-for-byte reproducible.
"""

# %%
import sys
from pathlib import Path

from runbench.report import boxplot_data, from_json, to_csv, to_markdown

export = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "tests/data/startup_replay.json"
report = from_json(export.read_text())
print(to_markdown(report))
print(to_csv(report))

# %%
# matplotlib is optional; the summaries are plain numbers
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

stats = []
for name in report.samples:
    b = boxplot_data(report.samples[name])
    stats.append({"label": name, "q1": b.q1, "med": b.median, "q3": b.q3,
                  "whislo": b.whisker_low, "whishi": b.whisker_high, "fliers": list(b.outliers)})
fig, ax = plt.subplots(figsize=(8, 3))
ax.bxp(stats, vert=False)
ax.set_xscale("log")
ax.set_xlabel("time [s]")
ax.set_title(report.title)
fig.tight_layout()
fig.savefig("replay_boxplot.png", dpi=120)
print("wrote replay_boxplot.png")
