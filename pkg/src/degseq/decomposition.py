"""Tree decompositions: validation, min-fill construction, nice form.

A tree decomposition is a tree of bags (vertex sets) satisfying the
usual three axioms: every vertex covered, every edge inside some bag,
and per-vertex connectivity.  The nice form refines it into a rooted
tree of leaf / introduce / forget / join nodes with empty root and leaf
bags, which is the shape the dynamic program consumes.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graph import Graph


class TreeDecomposition:
    """Unrooted tree of bags over vertices 1..n.

    Node ids are 0-based positions into ``bags``; ``edges`` are pairs of
    node ids.  Tree shape (connected, acyclic) is enforced here; the
    decomposition axioms relative to a graph are checked by
    :func:`validate_td`.
    """

    __slots__ = ("n", "bags", "edges")

    def __init__(self, n: int, bags, edges):
        bags = tuple(tuple(sorted(set(b))) for b in bags)
        for idx, bag in enumerate(bags):
            for v in bag:
                if not (1 <= v <= n):
                    raise ValueError(
                        f"bag {idx} references vertex {v} outside 1..{n}"
                    )
        b = len(bags)
        seen = set()
        adj: list[list[int]] = [[] for _ in range(b)]
        for x, y in edges:
            if x == y or not (0 <= x < b) or not (0 <= y < b):
                raise ValueError(f"bad tree edge ({x}, {y})")
            key = (min(x, y), max(x, y))
            if key in seen:
                raise ValueError(f"duplicate tree edge ({x}, {y})")
            seen.add(key)
            adj[x].append(y)
            adj[y].append(x)
        if b > 0:
            if len(seen) != b - 1:
                raise ValueError(
                    f"not a tree: {b} bags need {b - 1} edges, got {len(seen)}"
                )
            reached = {0}
            stack = [0]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in reached:
                        reached.add(y)
                        stack.append(y)
            if len(reached) != b:
                raise ValueError("not a tree: edge section is disconnected")
        elif edges:
            raise ValueError("tree edges given but no bags")
        self.n = n
        self.bags = bags
        self.edges = tuple(sorted(seen))

    @property
    def node_count(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def __repr__(self):
        return f"TreeDecomposition(n={self.n}, bags={len(self.bags)}, width={self.width})"


@dataclass(frozen=True)
class WidthReport:
    width: int
    bag_size_histogram: dict
    node_count: int


def width_report(bags) -> WidthReport:
    hist: dict[int, int] = {}
    for b in bags:
        hist[len(b)] = hist.get(len(b), 0) + 1
    width = max(hist, default=0) - 1
    return WidthReport(width, hist, sum(hist.values()))


def validate_td(g: Graph, td: TreeDecomposition) -> list[str]:
    """Check the three decomposition axioms; return violation messages."""
    violations = []
    if td.n != g.n:
        violations.append(
            f"decomposition declares n={td.n} but graph has n={g.n}"
        )
    bag_sets = [set(b) for b in td.bags]
    covered: set[int] = set()
    for b in bag_sets:
        covered |= b
    for v in range(1, g.n + 1):
        if v not in covered:
            violations.append(f"vertex {v} not covered by any bag")
    for u, v in g.edges:
        if not any(u in b and v in b for b in bag_sets):
            violations.append(f"edge {{{u}, {v}}} not covered by any bag")
    # Connectivity: the nodes containing v induce a forest; they form a
    # subtree iff (#nodes containing v) == (#tree edges whose both
    # endpoints contain v) + 1.
    node_count = {v: 0 for v in covered}
    edge_count = {v: 0 for v in covered}
    for b in bag_sets:
        for v in b:
            node_count[v] += 1
    for x, y in td.edges:
        for v in bag_sets[x] & bag_sets[y]:
            edge_count[v] += 1
    for v in sorted(covered):
        if node_count[v] != edge_count[v] + 1:
            violations.append(
                f"vertex {v} violates connectivity: its bags are disconnected"
            )
    return violations


def _min_fill_order(g: Graph):
    """Elimination order by minimum fill-in, ties to smallest vertex id.

    Returns (order, bags) where bags[t] is the elimination-time closed
    neighborhood of order[t].
    """
    adj: list[set[int]] = [set(a) for a in g.adjacency]
    alive = set(range(1, g.n + 1))

    def fill_of(v: int) -> int:
        nb = sorted(adj[v])
        cnt = 0
        for i, a in enumerate(nb):
            adj_a = adj[a]
            for b in nb[i + 1 :]:
                if b not in adj_a:
                    cnt += 1
        return cnt

    fills = {v: fill_of(v) for v in alive}
    heap = [(f, v) for v, f in fills.items()]
    heapq.heapify(heap)

    order: list[int] = []
    bags: list[tuple[int, ...]] = []
    while alive:
        while True:
            f, v = heapq.heappop(heap)
            if v in alive and fills[v] == f:
                break
        nbrs = sorted(adj[v])
        order.append(v)
        bags.append(tuple(sorted([v] + nbrs)))

        affected = set(nbrs)
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1 :]:
                if b not in adj[a]:
                    # fill edge: common neighbors lose one missing pair
                    affected |= adj[a] & adj[b]
                    adj[a].add(b)
                    adj[b].add(a)
        for a in nbrs:
            adj[a].discard(v)
        adj[v] = set()
        alive.discard(v)
        affected.discard(v)
        for x in affected:
            fills[x] = fill_of(x)
            heapq.heappush(heap, (fills[x], x))
    return order, bags


def min_fill_decompose(g: Graph) -> tuple[TreeDecomposition, WidthReport]:
    """Heuristic tree decomposition from a min-fill elimination order.

    Exact on chordal graphs (every k-tree reports width k); always valid.
    """
    order, bags = _min_fill_order(g)
    pos = {v: t for t, v in enumerate(order)}
    edges = []
    roots = []
    for t, v in enumerate(order):
        later = [u for u in bags[t] if u != v]
        if later:
            parent = min(later, key=lambda u: pos[u])
            edges.append((t, pos[parent]))
        else:
            roots.append(t)
    # one root per connected component; chain them so the result is a tree
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    td = TreeDecomposition(g.n, bags, edges)
    return td, width_report(td.bags)


class NiceDecomposition:
    """Rooted decomposition of typed nodes with empty root and leaf bags.

    Node data lives in parallel tuples indexed by node id: ``kind`` is
    one of "leaf" / "introduce" / "forget" / "join", ``bag`` the sorted
    vertex tuple, ``vertex`` the introduced or forgotten vertex (None
    otherwise).  Cone sets (union of bags in a subtree) are computed on
    first use and cached, so chain-shaped decompositions never pay for
    them.
    """

    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"

    def __init__(self, kinds, bags, vertices, children, root: int):
        self.kind = tuple(kinds)
        self.bag = tuple(tuple(sorted(b)) for b in bags)
        self.vertex = tuple(vertices)
        self.children = tuple(tuple(c) for c in children)
        n_nodes = len(self.kind)
        if not (
            len(self.bag) == len(self.vertex) == len(self.children) == n_nodes
        ):
            raise ValueError("node field lengths disagree")
        parent: list[int | None] = [None] * n_nodes
        for v in range(n_nodes):
            for c in self.children[v]:
                if not (0 <= c < n_nodes) or parent[c] is not None:
                    raise ValueError(f"bad child link {v} -> {c}")
                parent[c] = v
        if not (0 <= root < n_nodes) or parent[root] is not None:
            raise ValueError("bad root")
        self.parent = tuple(parent)
        self.root = root
        self._cone_cache: dict[int, frozenset] = {}

    @property
    def node_count(self) -> int:
        return len(self.kind)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bag), default=0) - 1

    def post_order(self) -> list[int]:
        """Node ids with every child before its parent (iterative)."""
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(self.children[v])
        out.reverse()
        return out

    def cone(self, v: int) -> frozenset:
        """I(T_v): union of all bags in the subtree rooted at v."""
        cached = self._cone_cache.get(v)
        if cached is not None:
            return cached
        # fill the cache for the whole subtree bottom-up
        stack = [v]
        todo = []
        while stack:
            x = stack.pop()
            if x in self._cone_cache:
                continue
            todo.append(x)
            stack.extend(self.children[x])
        for x in reversed(todo):
            acc = set(self.bag[x])
            for c in self.children[x]:
                acc |= self._cone_cache[c]
            self._cone_cache[x] = frozenset(acc)
        return self._cone_cache[v]

    def __repr__(self):
        return (
            f"NiceDecomposition(nodes={self.node_count}, width={self.width})"
        )


class _NiceBuilder:
    def __init__(self):
        self.kinds = []
        self.bags = []
        self.vertices = []
        self.children = []

    def add(self, kind, bag, vertex=None, children=()) -> int:
        self.kinds.append(kind)
        self.bags.append(tuple(bag))
        self.vertices.append(vertex)
        self.children.append(tuple(children))
        return len(self.kinds) - 1

    def leaf_chain(self, bag) -> int:
        node = self.add(NiceDecomposition.LEAF, ())
        acc: list[int] = []
        for v in sorted(bag):
            acc.append(v)
            node = self.add(NiceDecomposition.INTRODUCE, acc, v, (node,))
        return node

    def adapt(self, node: int, from_bag, to_bag) -> int:
        """Forget what leaves the bag, then introduce what enters it."""
        cur = set(from_bag)
        for v in sorted(cur - set(to_bag)):
            cur.discard(v)
            node = self.add(NiceDecomposition.FORGET, sorted(cur), v, (node,))
        for v in sorted(set(to_bag) - cur):
            cur.add(v)
            node = self.add(
                NiceDecomposition.INTRODUCE, sorted(cur), v, (node,)
            )
        return node


def to_nice(td: TreeDecomposition, g: Graph) -> NiceDecomposition:
    """Convert a valid decomposition to nice form, preserving width."""
    issues = validate_td(g, td)
    if issues:
        raise ValueError(
            "input decomposition is invalid: " + "; ".join(issues)
        )
    b = _NiceBuilder()
    if td.node_count == 0:
        root = b.add(NiceDecomposition.LEAF, ())
        return NiceDecomposition(b.kinds, b.bags, b.vertices, b.children, root)

    # root the input tree at node 0 and orient it
    adj: list[list[int]] = [[] for _ in range(td.node_count)]
    for x, y in td.edges:
        adj[x].append(y)
        adj[y].append(x)
    parent: list[int | None] = [None] * td.node_count
    order = [0]
    seen = {0}
    for x in order:
        for y in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                parent[y] = x
                order.append(y)
    kids: list[list[int]] = [[] for _ in range(td.node_count)]
    for y in order[1:]:
        kids[parent[y]].append(y)

    top: dict[int, int] = {}
    for x in reversed(order):  # children before parents
        bag = td.bags[x]
        if not kids[x]:
            top[x] = b.leaf_chain(bag)
            continue
        adapted = [b.adapt(top[c], td.bags[c], bag) for c in kids[x]]
        acc = adapted[0]
        for nxt in adapted[1:]:
            acc = b.add(NiceDecomposition.JOIN, bag, None, (acc, nxt))
        top[x] = acc

    root = b.adapt(top[0], td.bags[0], ())
    return NiceDecomposition(b.kinds, b.bags, b.vertices, b.children, root)


def validate_nice(
    g: Graph, ntd: NiceDecomposition, max_width: int | None = None
) -> list[str]:
    """Check every nice-form invariant; return violation messages.

    Covers node typing, empty root/leaf bags, the three underlying
    decomposition axioms, the width cap, and pairwise cone disjointness
    outside the bag at every join node.
    """
    violations = []
    for v in range(ntd.node_count):
        kind = ntd.kind[v]
        bag = set(ntd.bag[v])
        ch = ntd.children[v]
        if kind == NiceDecomposition.LEAF:
            if ch:
                violations.append(f"leaf node {v} has children")
            if bag:
                violations.append(f"leaf node {v} has nonempty bag {sorted(bag)}")
        elif kind == NiceDecomposition.INTRODUCE:
            if len(ch) != 1:
                violations.append(f"introduce node {v} has {len(ch)} children")
                continue
            i = ntd.vertex[v]
            child_bag = set(ntd.bag[ch[0]])
            if i not in bag or child_bag | {i} != bag or i in child_bag:
                violations.append(
                    f"introduce node {v}: child bag is not bag minus vertex {i}"
                )
        elif kind == NiceDecomposition.FORGET:
            if len(ch) != 1:
                violations.append(f"forget node {v} has {len(ch)} children")
                continue
            i = ntd.vertex[v]
            child_bag = set(ntd.bag[ch[0]])
            if i in bag or bag | {i} != child_bag:
                violations.append(
                    f"forget node {v}: child bag is not bag plus vertex {i}"
                )
        elif kind == NiceDecomposition.JOIN:
            if len(ch) != 2:
                violations.append(f"join node {v} has {len(ch)} children")
                continue
            if set(ntd.bag[ch[0]]) != bag or set(ntd.bag[ch[1]]) != bag:
                violations.append(f"join node {v}: children bags differ from bag")
        else:
            violations.append(f"node {v} has unknown kind {kind!r}")
    if ntd.bag[ntd.root]:
        violations.append(
            f"root bag is nonempty: {list(ntd.bag[ntd.root])}"
        )

    if max_width is not None and ntd.width > max_width:
        violations.append(f"width {ntd.width} exceeds maximum {max_width}")

    # underlying decomposition axioms
    covered: set[int] = set()
    for bag in ntd.bag:
        covered.update(bag)
    for v in range(1, g.n + 1):
        if v not in covered:
            violations.append(f"vertex {v} not covered by any bag")
    bag_sets = [set(b) for b in ntd.bag]
    edge_cover = set()
    for bag in ntd.bag:
        for i, u in enumerate(bag):
            for w in bag[i + 1 :]:
                if g.has_edge(u, w):
                    edge_cover.add((u, w))
    for e in g.edges:
        if e not in edge_cover:
            violations.append(f"edge {{{e[0]}, {e[1]}}} not covered by any bag")
    node_count = {v: 0 for v in covered}
    edge_count = {v: 0 for v in covered}
    for b in bag_sets:
        for v in b:
            node_count[v] += 1
    for x in range(ntd.node_count):
        p = ntd.parent[x]
        if p is None:
            continue
        for v in bag_sets[x] & bag_sets[p]:
            edge_count[v] += 1
    for v in sorted(covered):
        if node_count[v] != edge_count[v] + 1:
            violations.append(
                f"vertex {v} violates connectivity: its bags are disconnected"
            )

    # join cone disjointness outside the bag (the join recurrence needs it)
    if any(k == NiceDecomposition.JOIN for k in ntd.kind):
        for v in range(ntd.node_count):
            if ntd.kind[v] != NiceDecomposition.JOIN or len(ntd.children[v]) != 2:
                continue
            u, w = ntd.children[v]
            bag = set(ntd.bag[v])
            overlap = (ntd.cone(u) - bag) & (ntd.cone(w) - bag)
            if overlap:
                violations.append(
                    f"join cone overlap at node {v}: vertices {sorted(overlap)}"
                )
    return violations
