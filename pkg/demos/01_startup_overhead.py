"""
Startup overhead of a native binary versus a bytecode interpreter
=================================================================

The hello-world probe is timed as an opaque command, from spawn until its
exit code comes back. Here the "native" side is /bin/true and the bytecode
side is the Python build of the probe; swap in your own variants (wasmtime,
podman run ...) to reproduce a full runtime matrix.
"""

# %%
import shutil
import sys

from runbench.measure import ExecutionVariant, MeasurementProtocol, apply_environment, run_benchmark
from runbench.report import boxplot_data, build_report, to_markdown

variants = [
    ExecutionVariant("Python probe", [sys.executable, "-m", "runbench.workloads.noop"]),
    ExecutionVariant("Native true", [shutil.which("true") or "/bin/true"]),
]

# %%
# Warmups are run but discarded. Priority and CPU pinning are best effort:
# without root the report says "degraded" and measuring carries on.
protocol = MeasurementProtocol(warmups=5, iterations=50, high_priority=True, cpu_set={0})
print(apply_environment(protocol))

sample_sets = [run_benchmark(v, protocol) for v in variants]
report = build_report("Benchmark results for startup", sample_sets)
print(to_markdown(report))

# %%
# Five-number summaries for an external plotting tool
for s in sample_sets:
    b = boxplot_data(s)
    print(f"{b.variant_name:>14}: median {b.median * 1e3:.2f} ms, "
          f"IQR {(b.q3 - b.q1) * 1e3:.2f} ms, {len(b.outliers)} outliers")
