"""Reference workloads, each runnable as ``python -m runbench.workloads.<name>``."""
