"""milpforge: verifiable MILP instance generation, exact desk-scale solving,
natural-language templating, agent workflow orchestration, and benchmark
auditing."""

__version__ = "0.1.0"
