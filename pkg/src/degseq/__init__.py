"""Exact degree sequence optimization over graphs of small treewidth.

Given a host graph H on vertices 1..n and per-vertex integer cost
tables f_i on degrees {0, ..., n-1}, find a spanning-vertex subgraph
G of H minimizing sum_i f_i(d_i(G)).  The solver runs a dynamic
program over a nice tree decomposition, so the cost is polynomial for
any fixed decomposition width; brute-force oracles verify it exactly
on small instances.
"""

from .costs import (
    INFINITY,
    CostModel,
    cubic_gadget,
    evaluate,
    from_b_matching,
    from_factor,
    from_interval,
)
from .decomposition import (
    NiceDecomposition,
    TreeDecomposition,
    WidthReport,
    min_fill_decompose,
    to_nice,
    validate_nice,
    validate_td,
)
from .generators import generate
from .graph import (
    Graph,
    InducedSubgraph,
    SubgraphSolution,
    degrees,
    induced_subgraph,
    make_graph,
)
from .oracle import (
    OracleResult,
    brute_force_node_states,
    brute_force_solve,
    brute_force_state,
    cubic_subgraph_exists,
)
from .solver import (
    DpTables,
    StateCountReport,
    StateTable,
    handle_forget,
    handle_introduce,
    handle_join,
    handle_leaf,
    reconstruct,
    solve,
    state_count_report,
)

__all__ = [
    "INFINITY",
    "CostModel",
    "DpTables",
    "Graph",
    "InducedSubgraph",
    "NiceDecomposition",
    "OracleResult",
    "StateCountReport",
    "StateTable",
    "SubgraphSolution",
    "TreeDecomposition",
    "WidthReport",
    "brute_force_node_states",
    "brute_force_solve",
    "brute_force_state",
    "cubic_gadget",
    "cubic_subgraph_exists",
    "degrees",
    "evaluate",
    "from_b_matching",
    "from_factor",
    "from_interval",
    "generate",
    "handle_forget",
    "handle_introduce",
    "handle_join",
    "handle_leaf",
    "induced_subgraph",
    "make_graph",
    "min_fill_decompose",
    "reconstruct",
    "solve",
    "state_count_report",
    "to_nice",
    "validate_nice",
    "validate_td",
]

__version__ = "0.1.0"
