"""Deterministic instance generators for tests, crosschecks, and benchmarks."""

from __future__ import annotations

import random
from itertools import combinations

from .costs import CostModel
from .graph import Graph, make_graph

KINDS = ("path", "cycle", "ktree", "series-parallel")


def path_graph(n: int) -> Graph:
    return make_graph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return make_graph(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def k_tree(n: int, k: int, rng: random.Random) -> Graph:
    """Random k-tree: grow from K_{k+1} by attaching each new vertex to a
    uniformly random existing k-clique."""
    if k < 1:
        raise ValueError(f"ktree needs k >= 1, got {k}")
    if n < k + 1:
        raise ValueError(f"ktree with k={k} needs n >= {k + 1}, got {n}")
    edges = [(u, v) for u, v in combinations(range(1, k + 2), 2)]
    cliques = [c for c in combinations(range(1, k + 2), k)]
    for v in range(k + 2, n + 1):
        base = list(cliques[rng.randrange(len(cliques))])
        for u in base:
            edges.append((u, v))
        for skip in range(k):
            cliques.append(tuple(base[:skip] + base[skip + 1 :] + [v]))
    return make_graph(n, edges)


def series_parallel(n: int, rng: random.Random) -> Graph:
    """Random simple series-parallel graph grown by edge expansions.

    Starting from a single edge, each step picks a random edge (u, v)
    and either subdivides it (series) or adds a disjoint length-2 path
    u-w-v beside it (parallel); both add exactly one vertex and keep the
    graph simple with treewidth at most 2.
    """
    if n < 1:
        raise ValueError(f"series-parallel needs n >= 1, got {n}")
    if n == 1:
        return make_graph(1, [])
    edges = [(1, 2)]
    for w in range(3, n + 1):
        u, v = edges[rng.randrange(len(edges))]
        if rng.random() < 0.5:
            edges.remove((u, v))
        edges.append((u, w))
        edges.append((w, v))
    return make_graph(n, edges)


def generate(kind: str, n: int, k: int = 1, seed: int = 0) -> Graph:
    """Build a named instance family member, deterministic in the seed."""
    if n < 1:
        raise ValueError(f"generator needs n >= 1, got {n}")
    if kind == "path":
        return path_graph(n)
    if kind == "cycle":
        return cycle_graph(n)
    if kind == "ktree":
        return k_tree(n, k, random.Random(seed))
    if kind == "series-parallel":
        return series_parallel(n, random.Random(seed))
    raise ValueError(f"unknown generator kind {kind!r}; choose from {KINDS}")


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    """G(n, p) with each possible edge kept independently."""
    edges = [(u, v) for u, v in combinations(range(1, n + 1), 2) if rng.random() < p]
    return make_graph(n, edges)


def random_tables(rng: random.Random, n: int, lo: int = -9, hi: int = 9) -> CostModel:
    return CostModel(
        [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
    )


def random_instance(rng: random.Random, n_min: int = 2, n_max: int = 9):
    """One (graph, model) crosscheck instance: n uniform, p = 0.5, entries in -9..9."""
    n = rng.randint(n_min, n_max)
    graph = random_graph(rng, n, 0.5)
    model = random_tables(rng, n)
    return graph, model
