"""Per-vertex integer cost tables and the factor/matching reductions.

A cost model assigns each vertex i a total table f_i over the degree
range {0, ..., n-1}.  The objective of the whole package is to minimize
sum_i f_i(d_i(G)) over spanning-vertex subgraphs G of a host graph.
Infeasible subproblems elsewhere are priced at ``math.inf``; tables
themselves are always finite integers.
"""

from __future__ import annotations

import math
from .graph import SubgraphSolution, degrees

INFINITY = math.inf

# Finite table entries are kept small enough that any sum of n of them
# stays well inside 64-bit signed range, so ports to fixed-width
# integer arithmetic remain exact.
_MAGNITUDE_LIMIT = 2**62


class CostModel:
    """Dense per-vertex cost tables f_i : {0,...,n-1} -> int."""

    __slots__ = ("n", "tables")

    def __init__(self, tables):
        tables = tuple(tuple(int(x) for x in t) for t in tables)
        n = len(tables)
        for i, t in enumerate(tables):
            if len(t) != n:
                raise ValueError(
                    f"table for vertex {i + 1} has length {len(t)}, expected {n}"
                )
        max_abs = max((abs(x) for t in tables for x in t), default=0)
        if n * max_abs >= _MAGNITUDE_LIMIT:
            raise ValueError(
                f"table magnitude {max_abs} too large for n={n}: "
                f"n*maxAbs must stay below 2**62"
            )
        self.n = n
        self.tables = tables

    def __eq__(self, other):
        if isinstance(other, CostModel):
            return self.tables == other.tables
        return NotImplemented

    def __repr__(self):
        return f"CostModel(n={self.n})"


def evaluate(model: CostModel, sol: SubgraphSolution) -> int:
    """Objective value sum_i f_i(d_i) of a solution; always finite."""
    if model.n != sol.host.n:
        raise ValueError(
            f"cost model has n={model.n} but graph has n={sol.host.n}"
        )
    d = degrees(sol)
    return sum(t[d[i]] for i, t in enumerate(model.tables))


def _check_n(n: int) -> None:
    if n < 0:
        raise ValueError(f"vertex count must be nonnegative, got {n}")


def from_factor(degree_sets, n: int) -> CostModel:
    """Indicator-complement tables: f_i(x) = 0 if x in B_i else 1.

    The solved optimum is 0 exactly when some subgraph meets every B_i.
    """
    _check_n(n)
    degree_sets = list(degree_sets)
    if len(degree_sets) != n:
        raise ValueError(f"expected {n} degree sets, got {len(degree_sets)}")
    tables = []
    for i, b in enumerate(degree_sets):
        b = set(b)
        if not b:
            raise ValueError(f"degree set for vertex {i + 1} is empty")
        for x in b:
            if not (0 <= x <= n - 1):
                raise ValueError(
                    f"degree {x} for vertex {i + 1} outside 0..{n - 1}"
                )
        tables.append([0 if x in b else 1 for x in range(n)])
    return CostModel(tables)


def interval_table(lo: int, hi: int, n: int) -> list[int]:
    """Piecewise-linear table: lo-x below lo, 0 on [lo, hi], x-hi above."""
    return [lo - x if x < lo else (0 if x <= hi else x - hi) for x in range(n)]


def from_interval(bounds, n: int) -> CostModel:
    """Tables pricing the distance to the per-vertex degree interval [l_i, u_i]."""
    _check_n(n)
    bounds = list(bounds)
    if len(bounds) != n:
        raise ValueError(f"expected {n} interval pairs, got {len(bounds)}")
    tables = []
    for i, (lo, hi) in enumerate(bounds):
        if lo > hi:
            raise ValueError(
                f"interval for vertex {i + 1} has l={lo} > u={hi}"
            )
        if not (0 <= lo and hi <= n - 1):
            raise ValueError(
                f"interval ({lo}, {hi}) for vertex {i + 1} outside 0..{n - 1}"
            )
        tables.append(interval_table(lo, hi, n))
    return CostModel(tables)


def from_b_matching(targets, n: int) -> CostModel:
    """Tables f_i(x) = |x - b_i|; b_i = 1 everywhere is perfect matching."""
    _check_n(n)
    targets = list(targets)
    if len(targets) != n:
        raise ValueError(f"expected {n} targets, got {len(targets)}")
    for i, b in enumerate(targets):
        if not (0 <= b <= n - 1):
            raise ValueError(f"target {b} for vertex {i + 1} outside 0..{n - 1}")
    return CostModel([[abs(x - b) for x in range(n)] for b in targets])


def cubic_main_table(n: int) -> list[int]:
    return [(x - 3) ** 2 for x in range(n)]


def cubic_other_table(n: int) -> list[int]:
    return [x * (x - 3) ** 2 for x in range(n)]


def cubic_gadget(i: int, n: int) -> CostModel:
    """Gadget whose optimum is 0 iff some subgraph is 3-regular at i
    and has all other degrees in {0, 3}.

    Vertex i gets (x-3)^2 and every other vertex x*(x-3)^2; both are
    nonnegative, and the only zero-cost degree patterns are exactly the
    cubic-subgraph ones.
    """
    if n < 4:
        raise ValueError(f"cubic gadget needs n >= 4, got {n}")
    if not (1 <= i <= n):
        raise ValueError(f"vertex {i} out of range 1..{n}")
    other = cubic_other_table(n)
    main = cubic_main_table(n)
    return CostModel([main if v == i else other for v in range(1, n + 1)])
