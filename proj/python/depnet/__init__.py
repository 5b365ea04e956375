"""Two-mode paper/package dependency network analytics.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (
    CycleError,
    DependencyGraph,
    DivergenceError,
    EmptyInputError,
    FormatError,
    build_graph,
    classify_quadrant,
    gexf_dumps,
    gexf_loads,
    gini,
    katz_centrality,
    largest_connected_component,
    mention_components_acyclic,
    package_metrics,
    percentile_ranks,
    read_gexf,
    run_variants,
    strongly_connected_components,
    write_gexf,
)

__all__ = [
    "CycleError",
    "DependencyGraph",
    "DivergenceError",
    "EmptyInputError",
    "FormatError",
    "build_graph",
    "classify_quadrant",
    "gexf_dumps",
    "gexf_loads",
    "gini",
    "katz_centrality",
    "largest_connected_component",
    "mention_components_acyclic",
    "package_metrics",
    "percentile_ranks",
    "read_gexf",
    "run_variants",
    "strongly_connected_components",
    "write_gexf",
]
