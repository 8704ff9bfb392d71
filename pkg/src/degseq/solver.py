"""Dynamic program over a nice tree decomposition.

Each node v carries a table mapping bag states to the cheapest extended
cost of any witness subgraph below v.  A bag state is a pair

    (c, F)  ==  (degree tuple over the sorted bag, edge bitmask)

where ``c[p]`` is the required degree of the p-th bag vertex and ``F``
is a bitmask over the canonical list of host edges with both endpoints
in the bag (lexicographic order; bit j is the j-th such edge).  A state
means: some subgraph of the host restricted to the vertices seen below
v realizes exactly these bag degrees and exactly this bag-edge set.

Tables store only reachable (finite) states; a state that is absent is
infeasible, i.e. has value +infinity.  Handlers generate parent states
forward from child states, which visits exactly the finite part of the
state space, so the degree caps min(n-1, deg(i)) can never be exceeded.

Tables hold values only.  Reconstruction re-derives the optimal choice
at each node by scanning child states in canonical order (degree tuple
lexicographic, then mask) and taking the first one that attains the
stored value, so results are deterministic without per-state argmin
bookkeeping in the hot join loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costs import CostModel
from .decomposition import NiceDecomposition
from .graph import Graph, SubgraphSolution

# BagState keys are plain tuples: (degree_tuple, edge_mask)
BagState = tuple


class StateTable:
    """Reachable bag states of one node and their exact values."""

    __slots__ = ("node", "states")

    def __init__(self, node: int):
        self.node = node
        self.states: dict[BagState, int] = {}

    def sorted_items(self):
        return sorted(self.states.items())

    def __len__(self):
        return len(self.states)


def bag_edge_list(g: Graph, bag) -> list[tuple[int, int]]:
    """Host edges with both endpoints in the (sorted) bag, in canonical order."""
    out = []
    for i, u in enumerate(bag):
        for v in bag[i + 1 :]:
            if g.has_edge(u, v):
                out.append((u, v))
    return out


def degree_caps(g: Graph, bag) -> tuple[int, ...]:
    """Largest feasible degree per bag vertex: min(n-1, deg_H(i))."""
    return tuple(min(g.n - 1, g.degree(v)) for v in bag)


def _mask_remap_table(bit_targets: list[int]) -> list[int]:
    """table[m] = OR of bit_targets[j] over set bits j of m."""
    size = 1 << len(bit_targets)
    table = [0] * size
    for m in range(1, size):
        low = m & -m
        table[m] = table[m ^ low] | bit_targets[low.bit_length() - 1]
    return table


def _check_child(ntd: NiceDecomposition, v: int, expected_children: int):
    ch = ntd.children[v]
    if len(ch) != expected_children:
        raise ValueError(
            f"node {v} ({ntd.kind[v]}) has {len(ch)} children, "
            f"expected {expected_children}"
        )
    return ch


class _IntroduceGeometry:
    """Shared bookkeeping for applying or inverting an introduce step."""

    def __init__(self, ntd, v, graph):
        i = ntd.vertex[v]
        bag = ntd.bag[v]
        child_bag = ntd.bag[ntd.children[v][0]]
        if i is None or set(bag) != set(child_bag) | {i} or i in child_bag:
            raise ValueError(
                f"introduce node {v}: bag {list(bag)} is not child bag "
                f"{list(child_bag)} plus vertex {i}"
            )
        self.vertex = i
        self.pos = bag.index(i)
        parent_edges = bag_edge_list(graph, bag)
        child_edges = bag_edge_list(graph, child_bag)
        parent_bit = {e: 1 << j for j, e in enumerate(parent_edges)}
        # child mask bits -> parent mask bits (all survive)
        self.child_to_parent = _mask_remap_table(
            [parent_bit[e] for e in child_edges]
        )
        # parent mask bits of child edges, for inverting a parent mask
        self.child_bit = {parent_bit[e]: 1 << j for j, e in enumerate(child_edges)}
        # edges between i and the child bag: (parent bit, parent c position, edge)
        self.incident = []
        for e in parent_edges:
            if i in e:
                other = e[1] if e[0] == i else e[0]
                self.incident.append((parent_bit[e], bag.index(other), e))

    def split_parent_mask(self, mask: int) -> tuple[int, list]:
        """Parent mask -> (child mask, incident entries present in mask)."""
        child_mask = 0
        chosen = []
        for bit, pos, e in self.incident:
            if mask & bit:
                chosen.append((bit, pos, e))
                mask ^= bit
        while mask:
            low = mask & -mask
            child_mask |= self.child_bit[low]
            mask ^= low
        return child_mask, chosen


def handle_leaf(ntd: NiceDecomposition, v: int) -> StateTable:
    """Base table of a leaf: the empty state at cost 0."""
    if ntd.bag[v]:
        raise ValueError(f"leaf node {v} has nonempty bag {list(ntd.bag[v])}")
    _check_child(ntd, v, 0)
    table = StateTable(v)
    table.states[((), 0)] = 0
    return table


def handle_introduce(
    ntd: NiceDecomposition,
    v: int,
    child_table: StateTable,
    model: CostModel,
    graph: Graph,
) -> StateTable:
    """Extend child states by vertex i and every subset of its bag edges.

    For a child state (c_u, F_u) and a chosen set S of host edges
    between i and the child bag, the new state fixes deg(i) = |S|,
    bumps the S endpoints, and adds the marginal table costs.  Each
    output state has exactly one derivation, so no minimum is needed.
    """
    (u,) = _check_child(ntd, v, 1)
    if child_table.node != u:
        raise ValueError(f"child table is for node {child_table.node}, not {u}")
    geo = _IntroduceGeometry(ntd, v, graph)
    i = geo.vertex
    pos_i = geo.pos
    remap = geo.child_to_parent

    # all subsets of the incident edges, by ascending bit mask
    subsets = []
    for s in range(1 << len(geo.incident)):
        members = [geo.incident[j] for j in range(len(geo.incident)) if s >> j & 1]
        bits = 0
        for b, _, _ in members:
            bits |= b
        incs = tuple(
            (p, model.tables[ntd.bag[v][p] - 1]) for _, p, _ in members
        )
        subsets.append((bits, len(members), incs))

    f_i = model.tables[i - 1]
    out = StateTable(v)
    states = out.states
    try:
        for (c_u, m_u), g_u in child_table.states.items():
            base_mask = remap[m_u]
            for bits, count, incs in subsets:
                val = g_u + f_i[count]
                c_new = list(c_u)
                c_new.insert(pos_i, count)
                for p, ft in incs:
                    d = c_new[p] + 1
                    c_new[p] = d
                    val += ft[d] - ft[d - 1]
                states[(tuple(c_new), base_mask | bits)] = val
    except IndexError:
        raise ValueError(
            f"introduce node {v}: a bag degree exceeds n-1; "
            f"the decomposition is invalid"
        ) from None
    return out


def _forget_geometry(ntd, v, graph):
    i = ntd.vertex[v]
    bag = ntd.bag[v]
    child_bag = ntd.bag[ntd.children[v][0]]
    if i is None or set(child_bag) != set(bag) | {i} or i in bag:
        raise ValueError(
            f"forget node {v}: child bag {list(child_bag)} is not bag "
            f"{list(bag)} plus vertex {i}"
        )
    pos_i = child_bag.index(i)
    parent_edges = bag_edge_list(graph, bag)
    child_edges = bag_edge_list(graph, child_bag)
    parent_bit = {e: 1 << j for j, e in enumerate(parent_edges)}
    # edges incident to i vanish from the bag record
    remap = _mask_remap_table([parent_bit.get(e, 0) for e in child_edges])
    return pos_i, remap


def handle_forget(
    ntd: NiceDecomposition, v: int, child_table: StateTable, graph: Graph
) -> StateTable:
    """Drop vertex i: project child states and keep the minimum per image."""
    (u,) = _check_child(ntd, v, 1)
    if child_table.node != u:
        raise ValueError(f"child table is for node {child_table.node}, not {u}")
    pos_i, remap = _forget_geometry(ntd, v, graph)
    out = StateTable(v)
    states = out.states
    get = states.get
    for (c_u, m_u), g_u in child_table.states.items():
        key = (c_u[:pos_i] + c_u[pos_i + 1 :], remap[m_u])
        if g_u < get(key, _TOO_BIG):
            states[key] = g_u
    return out


_TOO_BIG = float("inf")

# flush accumulated join candidates to a compact form beyond this many rows
_JOIN_FLUSH_ROWS = 1 << 22


def _join_correction(f_loc, c_u, c_w):
    total = 0
    for p, ft in enumerate(f_loc):
        total += ft[c_u[p] + c_w[p]] - ft[c_u[p]] - ft[c_w[p]]
    return total


def _table_arrays(items, k):
    t = len(items)
    deg = np.array([key[0] for key, _ in items], dtype=np.int64).reshape(t, k)
    mask = np.fromiter((key[1] for key, _ in items), dtype=np.int64, count=t)
    val = np.fromiter((val for _, val in items), dtype=np.int64, count=t)
    return deg, mask, val


def _reduce_min(keys: np.ndarray, vals: np.ndarray):
    """Group rows by key and keep the minimum value per group."""
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    vs = vals[order]
    starts = np.flatnonzero(np.concatenate(([True], ks[1:] != ks[:-1])))
    return ks[starts], np.minimum.reduceat(vs, starts)


def handle_join(
    ntd: NiceDecomposition,
    v: int,
    left_table: StateTable,
    right_table: StateTable,
    model: CostModel,
    graph: Graph,
) -> StateTable:
    """Combine the two child tables over all edge-disjoint state pairs.

    Pair (c_u, F_u), (c_w, F_w) yields (c_u + c_w, F_u | F_w) when the
    masks are disjoint; the value corrects the double-counted bag terms:
    g_u + g_w + sum_i (f_i(c_u+c_w) - f_i(c_u) - f_i(c_w)).

    Pairs are enumerated vectorized, grouped by the left mask so that
    mask-incompatible pairs are skipped wholesale.  Degree tuples are
    packed into carry-free integer keys (radix 2*cap+1 per bag vertex),
    so a pair's key is just the sum of the children's keys.
    """
    u, w = _check_child(ntd, v, 2)
    if left_table.node != u or right_table.node != w:
        raise ValueError(
            f"join node {v}: child tables are for nodes "
            f"({left_table.node}, {right_table.node}), expected ({u}, {w})"
        )
    bag = ntd.bag[v]
    if ntd.bag[u] != bag or ntd.bag[w] != bag:
        raise ValueError(f"join node {v}: children bags differ from bag")
    k = len(bag)
    caps = degree_caps(graph, bag)
    n_edges = len(bag_edge_list(graph, bag))

    # carry-free mixed-radix layout for summed degree tuples
    radix = [2 * c + 1 for c in caps]
    strides = [0] * k
    acc = 1
    for p in range(k - 1, -1, -1):
        strides[p] = acc
        acc *= radix[p]
    box = acc
    if box.bit_length() + n_edges > 62:
        return _join_pairwise(
            ntd, v, bag, left_table, right_table, model
        )

    left_items = sorted(left_table.states.items())
    right_items = sorted(right_table.states.items())
    l_deg, l_mask, l_val = _table_arrays(left_items, k)
    r_deg, r_mask, r_val = _table_arrays(right_items, k)

    f_arr = [np.asarray(model.tables[x - 1], dtype=np.int64) for x in bag]
    stride_vec = np.array(strides, dtype=np.int64)
    l_key = l_deg @ stride_vec
    r_key = r_deg @ stride_vec
    # subtract the children's own bag terms once; the pair value is then
    # adjusted + sum_p f_p(c_u + c_w)
    l_adj = l_val.copy()
    r_adj = r_val.copy()
    for p in range(k):
        l_adj -= f_arr[p][l_deg[:, p]]
        r_adj -= f_arr[p][r_deg[:, p]]

    # group left states by mask
    mask_order = np.argsort(l_mask, kind="stable")
    sorted_masks = l_mask[mask_order]
    group_starts = np.flatnonzero(
        np.concatenate(([True], sorted_masks[1:] != sorted_masks[:-1]))
    )
    group_bounds = np.append(group_starts, len(sorted_masks))

    acc_keys: list[np.ndarray] = []
    acc_vals: list[np.ndarray] = []
    pending = 0

    def flush():
        nonlocal pending
        if len(acc_keys) > 1:
            keys, vals = _reduce_min(
                np.concatenate(acc_keys), np.concatenate(acc_vals)
            )
            acc_keys.clear()
            acc_vals.clear()
            acc_keys.append(keys)
            acc_vals.append(vals)
        pending = len(acc_keys[0]) if acc_keys else 0

    try:
        for gi in range(len(group_starts)):
            l_idx = mask_order[group_bounds[gi] : group_bounds[gi + 1]]
            mu = int(sorted_masks[group_bounds[gi]])
            r_sel = np.flatnonzero((r_mask & mu) == 0)
            if r_sel.size == 0:
                continue
            li = np.repeat(l_idx, r_sel.size)
            ri = np.tile(r_sel, l_idx.size)
            keys = l_key[li] + r_key[ri]
            vals = l_adj[li] + r_adj[ri]
            for p in range(k):
                vals += f_arr[p][l_deg[li, p] + r_deg[ri, p]]
            keys += (mu | r_mask[ri]) * box
            acc_keys.append(keys)
            acc_vals.append(vals)
            pending += keys.size
            if pending > _JOIN_FLUSH_ROWS:
                flush()
        flush()
    except IndexError:
        raise ValueError(
            f"join node {v}: children cones overlap outside the bag "
            f"(combined degree exceeds n-1)"
        ) from None

    out = StateTable(v)
    if not acc_keys:
        return out
    keys, vals = acc_keys[0], acc_vals[0]
    masks = keys // box
    dkeys = keys % box
    cols = []
    for p in range(k):
        cols.append(((dkeys // strides[p]) % radix[p]).tolist())
    masks = masks.tolist()
    vals = vals.tolist()
    states = out.states
    for row in range(len(masks)):
        states[(tuple(col[row] for col in cols), masks[row])] = vals[row]
    return out


def _join_pairwise(ntd, v, bag, left_table, right_table, model):
    # plain pair enumeration; used when degree ranges are too wide to
    # pack into 64-bit keys
    f_loc = [model.tables[x - 1] for x in bag]
    out = StateTable(v)
    states = out.states
    get = states.get
    right_items = [
        (key[0], key[1], val) for key, val in sorted(right_table.states.items())
    ]
    try:
        for (c_u, m_u), g_u in sorted(left_table.states.items()):
            for c_w, m_w, g_w in right_items:
                if m_u & m_w:
                    continue
                val = g_u + g_w + _join_correction(f_loc, c_u, c_w)
                key = (
                    tuple(a + b for a, b in zip(c_u, c_w)),
                    m_u | m_w,
                )
                if val < get(key, _TOO_BIG):
                    states[key] = val
    except IndexError:
        raise ValueError(
            f"join node {v}: children cones overlap outside the bag "
            f"(combined degree exceeds n-1)"
        ) from None
    return out


@dataclass
class DpTables:
    """All per-node state tables of one solve, plus the inputs they refer to."""

    graph: Graph
    model: CostModel
    ntd: NiceDecomposition
    per_node: list


def solve(graph: Graph, model: CostModel, ntd: NiceDecomposition):
    """Run the tree DP bottom-up; return (optimal value, tables).

    The root value is the exact minimum of sum_i f_i(d_i(G)) over all
    spanning-vertex subgraphs G of the host; it is always finite since
    the empty subgraph is feasible.
    """
    if model.n != graph.n:
        raise ValueError(
            f"cost model has n={model.n} but graph has n={graph.n}"
        )
    tables: list[StateTable | None] = [None] * ntd.node_count
    for v in ntd.post_order():
        kind = ntd.kind[v]
        if kind == NiceDecomposition.LEAF:
            tables[v] = handle_leaf(ntd, v)
        elif kind == NiceDecomposition.INTRODUCE:
            child = ntd.children[v][0]
            tables[v] = handle_introduce(ntd, v, tables[child], model, graph)
        elif kind == NiceDecomposition.FORGET:
            child = ntd.children[v][0]
            tables[v] = handle_forget(ntd, v, tables[child], graph)
        elif kind == NiceDecomposition.JOIN:
            lc, rc = ntd.children[v]
            tables[v] = handle_join(ntd, v, tables[lc], tables[rc], model, graph)
        else:
            raise ValueError(f"node {v} has unknown kind {kind!r}")
    root_table = tables[ntd.root]
    if list(root_table.states) != [((), 0)]:
        raise ValueError(
            f"root table malformed: states {list(root_table.states)}"
        )
    return root_table.states[((), 0)], DpTables(graph, model, ntd, tables)


def _descend_introduce(tables, v, state, value, chosen):
    ntd = tables.ntd
    geo = _IntroduceGeometry(ntd, v, tables.graph)
    c_v, m_v = state
    child_mask, picked = geo.split_parent_mask(m_v)
    c_list = list(c_v)
    if c_list.pop(geo.pos) != len(picked):
        raise RuntimeError(
            f"state at introduce node {v} disagrees with its own mask"
        )
    for _, pos_other, e in picked:
        chosen.append(e)
        c_list[pos_other if pos_other < geo.pos else pos_other - 1] -= 1
    return ntd.children[v][0], (tuple(c_list), child_mask)


def _descend_forget(tables, v, state, value):
    ntd = tables.ntd
    pos_i, remap = _forget_geometry(ntd, v, tables.graph)
    child = ntd.children[v][0]
    c_v, m_v = state
    for (c_u, m_u), g_u in tables.per_node[child].sorted_items():
        if g_u != value:
            continue
        if c_u[:pos_i] + c_u[pos_i + 1 :] == c_v and remap[m_u] == m_v:
            return child, (c_u, m_u)
    raise RuntimeError(f"no child state attains value {value} at forget node {v}")


def _descend_join(tables, v, state, value):
    ntd = tables.ntd
    lc, rc = ntd.children[v]
    f_loc = [tables.model.tables[x - 1] for x in ntd.bag[v]]
    right = tables.per_node[rc].states
    c_v, m_v = state
    for (c_u, m_u), g_u in tables.per_node[lc].sorted_items():
        if m_u & ~m_v:
            continue
        c_w = tuple(a - b for a, b in zip(c_v, c_u))
        if any(x < 0 for x in c_w):
            continue
        key_w = (c_w, m_v ^ m_u)
        g_w = right.get(key_w)
        if g_w is None:
            continue
        if g_u + g_w + _join_correction(f_loc, c_u, c_w) == value:
            return (lc, (c_u, m_u)), (rc, key_w)
    raise RuntimeError(f"no state pair attains value {value} at join node {v}")


def reconstruct(tables: DpTables, ntd: NiceDecomposition | None = None):
    """Walk the tables from the root and collect an optimal edge set.

    At each node the first child state (in canonical state order) that
    attains the stored value is taken, so the result is deterministic.
    """
    if ntd is None:
        ntd = tables.ntd
    chosen: list[tuple[int, int]] = []
    stack = [(ntd.root, ((), 0))]
    while stack:
        v, state = stack.pop()
        value = tables.per_node[v].states.get(state)
        if value is None:
            raise RuntimeError(f"missing state {state} at node {v}")
        kind = ntd.kind[v]
        if kind == NiceDecomposition.LEAF:
            continue
        if kind == NiceDecomposition.INTRODUCE:
            stack.append(_descend_introduce(tables, v, state, value, chosen))
        elif kind == NiceDecomposition.FORGET:
            stack.append(_descend_forget(tables, v, state, value))
        elif kind == NiceDecomposition.JOIN:
            left, right = _descend_join(tables, v, state, value)
            stack.append(left)
            stack.append(right)
        else:
            raise RuntimeError(f"unknown node kind {kind!r}")
    return SubgraphSolution(tables.graph, frozenset(chosen))


@dataclass(frozen=True)
class StateCountReport:
    per_node: tuple
    total: int
    per_node_bound: tuple
    bound_total: int


def state_count_report(tables: DpTables) -> StateCountReport:
    """Stored-state counts per node, with the combinatorial upper bounds."""
    graph = tables.graph
    ntd = tables.ntd
    counts = []
    bounds = []
    for v in range(ntd.node_count):
        counts.append(len(tables.per_node[v].states))
        bound = 1 << len(bag_edge_list(graph, ntd.bag[v]))
        for cap in degree_caps(graph, ntd.bag[v]):
            bound *= cap + 1
        bounds.append(bound)
    return StateCountReport(
        tuple(counts), sum(counts), tuple(bounds), sum(bounds)
    )
