"""Cross-runtime process benchmarking harness and reference workloads.

The top-level package stays import-light so the workload entry points
start quickly; import the harness from its submodules::

    from runbench.measure import ExecutionVariant, MeasurementProtocol, run_benchmark
    from runbench.report import build_report, to_markdown
"""

__version__ = "0.1.0"
