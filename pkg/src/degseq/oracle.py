"""Exhaustive reference solvers used to verify the tree DP.

These enumerate all 2^m edge subsets (vectorized over numpy chunks), so
they carry hard size guards; they exist for transparency, not speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import CostModel
from .decomposition import NiceDecomposition
from .graph import Graph, SubgraphSolution
from .solver import bag_edge_list

MAX_SOLVE_EDGES = 25
MAX_STATE_EDGES = 20
_CHUNK_BITS = 20


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: SubgraphSolution


def _incidence_masks(n: int, edges) -> list[int]:
    inc = [0] * (n + 1)
    for j, (u, v) in enumerate(edges):
        inc[u] |= 1 << j
        inc[v] |= 1 << j
    return inc


def _chunks(m: int):
    total = 1 << m
    step = 1 << min(m, _CHUNK_BITS)
    for start in range(0, total, step):
        yield np.arange(start, min(start + step, total), dtype=np.uint32)


def brute_force_solve(graph: Graph, model: CostModel) -> OracleResult:
    """Exact optimum by enumerating every edge subset of the host.

    The witness is the first optimal subset in mask order over the
    canonical edge list (bit j = j-th edge).
    """
    if graph.m > MAX_SOLVE_EDGES:
        raise ValueError(
            f"graph has {graph.m} edges, oracle guard is {MAX_SOLVE_EDGES}"
        )
    if model.n != graph.n:
        raise ValueError(
            f"cost model has n={model.n} but graph has n={graph.n}"
        )
    inc = _incidence_masks(graph.n, graph.edges)
    tables = [np.asarray(t, dtype=np.int64) for t in model.tables]
    zero_cost = sum(int(t[0]) for t in tables)

    best_val = None
    best_mask = 0
    for masks in _chunks(graph.m):
        costs = np.full(masks.shape, zero_cost, dtype=np.int64)
        for v in range(1, graph.n + 1):
            if inc[v]:
                deg = np.bitwise_count(masks & np.uint32(inc[v]))
                t = tables[v - 1]
                costs += t[deg] - t[0]
        idx = int(np.argmin(costs))
        val = int(costs[idx])
        if best_val is None or val < best_val:
            best_val = val
            best_mask = int(masks[idx])
    chosen = frozenset(
        e for j, e in enumerate(graph.edges) if best_mask >> j & 1
    )
    return OracleResult(best_val, SubgraphSolution(graph, chosen))


def _cone_edge_setup(graph: Graph, ntd: NiceDecomposition, v: int):
    """Edges of the host inside the cone of v, plus bag bookkeeping."""
    cone = ntd.cone(v)
    cone_edges = [e for e in graph.edges if e[0] in cone and e[1] in cone]
    bag = ntd.bag[v]
    cone_pos = {e: q for q, e in enumerate(cone_edges)}
    bag_positions = [cone_pos[e] for e in bag_edge_list(graph, bag)]
    return cone, cone_edges, bag, bag_positions


def brute_force_state(
    graph: Graph, ntd: NiceDecomposition, v: int, state, model: CostModel
):
    """Exact table value g(v, c, F) by constrained enumeration.

    ``state`` is a (degree tuple, bag-edge mask) pair in the solver's
    key convention.  Returns math.inf when no subgraph of the cone
    matches the bag constraints.
    """
    c, f_mask = state
    cone, cone_edges, bag, bag_positions = _cone_edge_setup(graph, ntd, v)
    if len(cone_edges) > MAX_STATE_EDGES:
        raise ValueError(
            f"cone of node {v} has {len(cone_edges)} edges, "
            f"oracle guard is {MAX_STATE_EDGES}"
        )
    if len(c) != len(bag):
        raise ValueError(f"degree tuple has {len(c)} entries, bag has {len(bag)}")
    inc = _incidence_masks(graph.n, cone_edges)
    tables = [np.asarray(t, dtype=np.int64) for t in model.tables]

    bag_region = 0
    required = 0
    for j, q in enumerate(bag_positions):
        bag_region |= 1 << q
        if f_mask >> j & 1:
            required |= 1 << q
    bag_set = set(bag)
    bag_idx = {x: p for p, x in enumerate(bag)}

    best = math.inf
    for masks in _chunks(len(cone_edges)):
        ok = (masks & np.uint32(bag_region)) == np.uint32(required)
        costs = np.zeros(masks.shape, dtype=np.int64)
        for x in sorted(cone):
            deg = np.bitwise_count(masks & np.uint32(inc[x]))
            if x in bag_set:
                ok &= deg == c[bag_idx[x]]
            costs += tables[x - 1][deg]
        if ok.any():
            val = int(costs[ok].min())
            if val < best:
                best = val
    return best


def brute_force_node_states(
    graph: Graph, ntd: NiceDecomposition, v: int, model: CostModel
) -> dict:
    """Every feasible bag state of node v with its exact value.

    One enumeration of the cone's edge subsets yields both directions of
    the table check: states present here must match the DP exactly, and
    states absent here are infeasible.
    """
    cone, cone_edges, bag, bag_positions = _cone_edge_setup(graph, ntd, v)
    if len(cone_edges) > MAX_STATE_EDGES:
        raise ValueError(
            f"cone of node {v} has {len(cone_edges)} edges, "
            f"oracle guard is {MAX_STATE_EDGES}"
        )
    inc = _incidence_masks(graph.n, cone_edges)
    tables = [np.asarray(t, dtype=np.int64) for t in model.tables]
    bag_set = set(bag)
    # fixed per-vertex radix so composite keys agree across chunks
    radices = [bin(inc[x]).count("1") + 1 for x in bag]

    out: dict = {}
    for masks in _chunks(len(cone_edges)):
        costs = np.zeros(masks.shape, dtype=np.int64)
        bag_degs = {}
        for x in sorted(cone):
            deg = np.bitwise_count(masks & np.uint32(inc[x]))
            costs += tables[x - 1][deg]
            if x in bag_set:
                bag_degs[x] = deg.astype(np.int64)
        key = np.zeros(masks.shape, dtype=np.int64)
        for j, q in enumerate(bag_positions):
            key |= ((masks >> np.uint32(q)) & 1).astype(np.int64) << j
        for x, r in zip(bag, radices):
            key = key * r + bag_degs[x]
        order = np.argsort(key, kind="stable")
        ks = key[order]
        cs = costs[order]
        starts = np.flatnonzero(np.concatenate(([True], ks[1:] != ks[:-1])))
        mins = np.minimum.reduceat(cs, starts)
        for group_key, group_min in zip(ks[starts], mins):
            rest = int(group_key)
            digits = []
            for r in reversed(radices):
                digits.append(rest % r)
                rest //= r
            state = (tuple(reversed(digits)), rest)
            val = int(group_min)
            if val < out.get(state, math.inf):
                out[state] = val
    return out


def cubic_subgraph_exists(graph: Graph) -> bool:
    """True iff some nonempty edge subset has all degrees in {0, 3}."""
    if graph.m > MAX_SOLVE_EDGES:
        raise ValueError(
            f"graph has {graph.m} edges, oracle guard is {MAX_SOLVE_EDGES}"
        )
    if graph.m == 0:
        return False
    inc = _incidence_masks(graph.n, graph.edges)
    active = [v for v in range(1, graph.n + 1) if inc[v]]
    for masks in _chunks(graph.m):
        ok = masks != 0
        for v in active:
            deg = np.bitwise_count(masks & np.uint32(inc[v]))
            ok &= (deg == 0) | (deg == 3)
            if not ok.any():
                break
        else:
            if ok.any():
                return True
    return False
