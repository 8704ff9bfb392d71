"""Simple undirected graphs on vertices 1..n with canonical edge storage."""

from __future__ import annotations

from dataclasses import dataclass, field


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    """Return the edge {u, v} as a (min, max) pair."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices 1..n.

    Edges are stored canonically (smaller endpoint first) and sorted
    lexicographically; ``edge_index`` maps each canonical edge to its
    position in that order, which fixes the bit layout used by edge
    bitmasks elsewhere in the package.
    """

    __slots__ = ("n", "edges", "adjacency", "edge_index")

    def __init__(self, n: int, edges: tuple[tuple[int, int], ...]):
        self.n = n
        self.edges = edges
        self.edge_index = {e: i for i, e in enumerate(edges)}
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = tuple(tuple(sorted(a)) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edge_index

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def __eq__(self, other):
        if isinstance(other, Graph):
            return self.n == other.n and self.edges == other.edges
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def make_graph(n: int, edge_list) -> Graph:
    """Build a validated Graph from 1-based vertex pairs.

    Reversed duplicates are merged; loops and out-of-range endpoints are
    rejected with the offending item named.
    """
    if n < 0:
        raise ValueError(f"vertex count must be nonnegative, got {n}")
    seen = set()
    for u, v in edge_list:
        if u == v:
            raise ValueError(f"loop edge ({u}, {v}) not allowed")
        if not (1 <= u <= n) or not (1 <= v <= n):
            raise ValueError(f"edge ({u}, {v}) out of range 1..{n}")
        seen.add(canonical_edge(u, v))
    return Graph(n, tuple(sorted(seen)))


@dataclass(frozen=True)
class InducedSubgraph:
    """Induced subgraph relabeled to 1..|s|, with the map back to host ids."""

    graph: Graph
    original_ids: tuple[int, ...]  # original_ids[new - 1] = original vertex


def induced_subgraph(g: Graph, s) -> InducedSubgraph:
    """Subgraph of g induced by vertex set s, vertices renamed 1..|s|."""
    vs = sorted(set(s))
    for v in vs:
        if not (1 <= v <= g.n):
            raise ValueError(f"vertex {v} out of range 1..{g.n}")
    new_id = {v: i + 1 for i, v in enumerate(vs)}
    keep = set(vs)
    edges = [
        (new_id[u], new_id[v]) for u, v in g.edges if u in keep and v in keep
    ]
    return InducedSubgraph(Graph(len(vs), tuple(sorted(edges))), tuple(vs))


@dataclass(frozen=True)
class SubgraphSolution:
    """An edge subset of a host graph; the vertex set is always all of 1..n."""

    host: Graph
    chosen: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for e in self.chosen:
            if e not in self.host.edge_index:
                raise ValueError(f"edge {e} not in host graph")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.chosen)


def degrees(sol: SubgraphSolution) -> list[int]:
    """Per-vertex degree vector of the solution; index v-1 holds d_v."""
    d = [0] * sol.host.n
    for u, v in sol.chosen:
        d[u - 1] += 1
        d[v - 1] += 1
    return d
