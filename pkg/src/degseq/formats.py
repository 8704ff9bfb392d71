"""Text formats: .gr graphs, cost tables, .td decompositions, solutions.

Graphs use the PACE-style .gr format (``c`` comments, ``p tw <n> <m>``
header, 1-based edge lines).  Decompositions use the PACE .td format
(``s td <#bags> <width+1> <n>``, ``b <id> <vertices...>`` bag lines,
then bag-id pairs as tree edges).  Cost files are line oriented: each
line names a vertex id (or ``default``) followed by a family keyword
and its parameters.
"""

from __future__ import annotations

from .costs import (
    CostModel,
    cubic_main_table,
    cubic_other_table,
    interval_table,
)
from .decomposition import NiceDecomposition, TreeDecomposition
from .graph import Graph, SubgraphSolution, canonical_edge, degrees, make_graph


def _data_lines(text: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield ln, line


def parse_graph_file(text: str) -> Graph:
    """Parse a .gr graph; every error names the offending line."""
    n = m = None
    edges = []
    seen = {}
    for ln, line in _data_lines(text):
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"line {ln}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "tw":
                raise ValueError(
                    f"line {ln}: malformed header {line!r}, expected 'p tw <n> <m>'"
                )
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ValueError(f"line {ln}: non-integer header fields") from None
            if n < 0 or m < 0:
                raise ValueError(f"line {ln}: negative header fields")
        else:
            if n is None:
                raise ValueError(f"line {ln}: edge line before problem line")
            if len(parts) != 2:
                raise ValueError(f"line {ln}: malformed edge line {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"line {ln}: non-integer edge endpoints") from None
            if u == v:
                raise ValueError(f"line {ln}: loop edge ({u}, {v})")
            if not (1 <= u <= n) or not (1 <= v <= n):
                raise ValueError(
                    f"line {ln}: edge ({u}, {v}) out of range 1..{n}"
                )
            key = canonical_edge(u, v)
            if key in seen:
                raise ValueError(
                    f"line {ln}: duplicate edge ({u}, {v}), first seen on "
                    f"line {seen[key]}"
                )
            seen[key] = ln
            edges.append((u, v))
    if n is None:
        raise ValueError("missing problem line 'p tw <n> <m>'")
    if len(edges) != m:
        raise ValueError(
            f"header declares m={m} but file has {len(edges)} edge lines"
        )
    return make_graph(n, edges)


def emit_graph_file(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def _expand_family(family: str, params: list[str], n: int, ln: int) -> list[int]:
    try:
        if family == "table":
            values = [int(x) for x in params]
            if len(values) != n:
                raise ValueError(
                    f"line {ln}: table has {len(values)} entries, expected {n}"
                )
            return values
        if family == "set":
            if len(params) != 1:
                raise ValueError(
                    f"line {ln}: set takes one comma-separated list of degrees"
                )
            degs = {int(x) for x in params[0].split(",")}
            if not degs:
                raise ValueError(f"line {ln}: empty degree set")
            bad = [x for x in degs if not (0 <= x <= n - 1)]
            if bad:
                raise ValueError(
                    f"line {ln}: degree {bad[0]} outside 0..{n - 1}"
                )
            return [0 if x in degs else 1 for x in range(n)]
        if family == "interval":
            if len(params) != 2:
                raise ValueError(f"line {ln}: interval takes two bounds")
            lo, hi = int(params[0]), int(params[1])
            if lo > hi:
                raise ValueError(f"line {ln}: interval has l={lo} > u={hi}")
            if not (0 <= lo and hi <= n - 1):
                raise ValueError(
                    f"line {ln}: interval ({lo}, {hi}) outside 0..{n - 1}"
                )
            return interval_table(lo, hi, n)
        if family == "target":
            if len(params) != 1:
                raise ValueError(f"line {ln}: target takes one degree")
            b = int(params[0])
            if not (0 <= b <= n - 1):
                raise ValueError(f"line {ln}: target {b} outside 0..{n - 1}")
            return [abs(x - b) for x in range(n)]
        if family == "cubic-main":
            if params:
                raise ValueError(f"line {ln}: cubic-main takes no parameters")
            return cubic_main_table(n)
        if family == "cubic-other":
            if params:
                raise ValueError(f"line {ln}: cubic-other takes no parameters")
            return cubic_other_table(n)
    except ValueError as err:
        if str(err).startswith(f"line {ln}"):
            raise
        raise ValueError(f"line {ln}: bad parameters for {family}: {err}") from None
    raise ValueError(f"line {ln}: unknown cost family {family!r}")


def parse_costs_file(text: str, n: int) -> CostModel:
    """Parse per-vertex cost lines; ``default`` fills unlisted vertices."""
    explicit: dict[int, list[int]] = {}
    default: list[int] | None = None
    for ln, line in _data_lines(text):
        parts = line.split()
        if len(parts) < 2:
            raise ValueError(f"line {ln}: malformed cost line {line!r}")
        target, family, params = parts[0], parts[1], parts[2:]
        table = _expand_family(family, params, n, ln)
        if target == "default":
            if default is not None:
                raise ValueError(f"line {ln}: duplicate default line")
            default = table
        else:
            try:
                vid = int(target)
            except ValueError:
                raise ValueError(
                    f"line {ln}: vertex id must be an integer or 'default'"
                ) from None
            if not (1 <= vid <= n):
                raise ValueError(f"line {ln}: vertex {vid} outside 1..{n}")
            if vid in explicit:
                raise ValueError(f"line {ln}: duplicate table for vertex {vid}")
            explicit[vid] = table
    tables = []
    for vid in range(1, n + 1):
        if vid in explicit:
            tables.append(explicit[vid])
        elif default is not None:
            tables.append(default)
        else:
            raise ValueError(f"vertex {vid} has no cost table and no default line")
    return CostModel(tables)


def parse_td_file(text: str) -> TreeDecomposition:
    """Parse a PACE .td file into a validated tree of bags."""
    header = None
    bags: dict[int, tuple[int, ...]] = {}
    tree_edges = []
    for ln, line in _data_lines(text):
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise ValueError(f"line {ln}: duplicate solution line")
            if len(parts) != 5 or parts[1] != "td":
                raise ValueError(
                    f"line {ln}: malformed solution line {line!r}, "
                    f"expected 's td <#bags> <width+1> <n>'"
                )
            try:
                header = (int(parts[2]), int(parts[3]), int(parts[4]))
            except ValueError:
                raise ValueError(f"line {ln}: non-integer solution fields") from None
        elif parts[0] == "b":
            if header is None:
                raise ValueError(f"line {ln}: bag line before solution line")
            try:
                bid = int(parts[1])
                vs = tuple(int(x) for x in parts[2:])
            except (ValueError, IndexError):
                raise ValueError(f"line {ln}: malformed bag line {line!r}") from None
            if not (1 <= bid <= header[0]):
                raise ValueError(
                    f"line {ln}: bag id {bid} outside 1..{header[0]}"
                )
            if bid in bags:
                raise ValueError(f"line {ln}: duplicate bag id {bid}")
            for v in vs:
                if not (1 <= v <= header[2]):
                    raise ValueError(
                        f"line {ln}: bag {bid} references vertex {v} "
                        f"outside 1..{header[2]}"
                    )
            bags[bid] = vs
        else:
            if header is None:
                raise ValueError(f"line {ln}: tree edge before solution line")
            if len(parts) != 2:
                raise ValueError(f"line {ln}: malformed tree edge {line!r}")
            try:
                x, y = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"line {ln}: non-integer tree edge") from None
            for b in (x, y):
                if not (1 <= b <= header[0]):
                    raise ValueError(
                        f"line {ln}: tree edge references bag {b} "
                        f"outside 1..{header[0]}"
                    )
            tree_edges.append((x - 1, y - 1))
    if header is None:
        raise ValueError("missing solution line 's td <#bags> <width+1> <n>'")
    n_bags, width_plus_1, n = header
    bag_list = [bags.get(bid, ()) for bid in range(1, n_bags + 1)]
    missing = [bid for bid in range(1, n_bags + 1) if bid not in bags]
    if missing:
        raise ValueError(f"bag {missing[0]} declared but never defined")
    try:
        td = TreeDecomposition(n, bag_list, tree_edges)
    except ValueError as err:
        raise ValueError(f"bad tree structure: {err}") from None
    actual = max((len(b) for b in td.bags), default=0)
    if actual != width_plus_1:
        raise ValueError(
            f"solution line declares width+1 = {width_plus_1} but the "
            f"largest bag has {actual} vertices"
        )
    return td


def emit_td_file(td) -> str:
    """Emit a decomposition (tree or nice) in canonical .td form."""
    if isinstance(td, NiceDecomposition):
        bags = td.bag
        edges = sorted(
            (min(x, p), max(x, p))
            for x in range(td.node_count)
            for p in [td.parent[x]]
            if p is not None
        )
        n = max((v for b in bags for v in b), default=0)
    elif isinstance(td, TreeDecomposition):
        bags = td.bags
        edges = td.edges
        n = td.n
    else:
        raise TypeError(f"cannot emit {type(td).__name__} as a .td file")
    width_plus_1 = max((len(b) for b in bags), default=0)
    lines = [f"s td {len(bags)} {width_plus_1} {n}"]
    for i, bag in enumerate(bags, start=1):
        lines.append(" ".join(["b", str(i)] + [str(v) for v in bag]))
    lines.extend(f"{x + 1} {y + 1}" for x, y in sorted(edges))
    return "\n".join(lines) + "\n"


def emit_solution_file(value: int, sol: SubgraphSolution) -> str:
    lines = [f"value {value}"]
    lines.extend(f"edge {u} {v}" for u, v in sol.sorted_edges())
    return "\n".join(lines) + "\n"


def format_run_report(
    value: int,
    sol: SubgraphSolution,
    width: int,
    node_count: int,
    state_total: int,
    seconds: float,
) -> str:
    """Human- and machine-readable solve report.

    Everything except the trailing ``time`` line is a pure function of
    the inputs; the time line is a measurement and is excluded from
    byte-identity comparisons.
    """
    lines = [
        f"optimum {value}",
        f"width {width}",
        f"nodes {node_count}",
        f"states {state_total}",
        "degrees " + " ".join(str(d) for d in degrees(sol)),
        f"edges {len(sol.chosen)}",
    ]
    lines.extend(f"edge {u} {v}" for u, v in sol.sorted_edges())
    lines.append(f"time {seconds:.3f}")
    return "\n".join(lines) + "\n"
