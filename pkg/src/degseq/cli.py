"""Command-line frontend.

Verbs: solve, decompose, validate-td, gen, oracle, crosscheck, bench.
Exit codes: 0 success, 1 input error, 2 width exceeded, 3 internal
invariant breach (including a failed oracle crosscheck).
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from .decomposition import min_fill_decompose, to_nice, validate_nice, validate_td
from .costs import evaluate
from .formats import (
    emit_graph_file,
    emit_solution_file,
    emit_td_file,
    format_run_report,
    parse_costs_file,
    parse_graph_file,
    parse_td_file,
)
from .generators import KINDS, generate, random_instance
from .oracle import MAX_SOLVE_EDGES, brute_force_solve
from .graph import degrees
from .solver import reconstruct, solve, state_count_report

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_WIDTH = 2
EXIT_INTERNAL = 3


class WidthExceeded(Exception):
    pass


class InternalBreach(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; keep exit code 2 reserved for width
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text()


def _solve_pipeline(graph, model, td, max_width):
    if max_width is not None and td.width > max_width:
        raise WidthExceeded(
            f"decomposition width {td.width} exceeds --max-width {max_width}"
        )
    ntd = to_nice(td, graph)
    issues = validate_nice(graph, ntd, max_width)
    if issues:
        raise InternalBreach("nice decomposition invalid: " + issues[0])
    started = time.perf_counter()
    value, tables = solve(graph, model, ntd)
    sol = reconstruct(tables)
    elapsed = time.perf_counter() - started
    if evaluate(model, sol) != value:
        raise InternalBreach(
            "reconstructed solution does not evaluate to the optimum"
        )
    return value, sol, ntd, tables, elapsed


def _cmd_solve(args) -> int:
    graph = parse_graph_file(_read(args.graph))
    model = parse_costs_file(_read(args.costs), graph.n)
    if args.td:
        td = parse_td_file(_read(args.td))
        issues = validate_td(graph, td)
        if issues:
            print("invalid decomposition:", file=sys.stderr)
            for issue in issues:
                print(f"  {issue}", file=sys.stderr)
            return EXIT_INPUT
    else:
        td, _ = min_fill_decompose(graph)
    value, sol, ntd, tables, elapsed = _solve_pipeline(
        graph, model, td, args.max_width
    )
    counts = state_count_report(tables)
    sys.stdout.write(
        format_run_report(
            value, sol, ntd.width, ntd.node_count, counts.total, elapsed
        )
    )
    if args.emit_solution:
        Path(args.emit_solution).write_text(emit_solution_file(value, sol))
    if args.check_oracle:
        if graph.m <= MAX_SOLVE_EDGES:
            ref = brute_force_solve(graph, model)
            if ref.optimum != value:
                raise InternalBreach(
                    f"oracle disagrees: dp={value} oracle={ref.optimum}"
                )
            print("oracle ok")
        else:
            print(f"oracle skipped (guard: m={graph.m} > {MAX_SOLVE_EDGES})")
    return EXIT_OK


def _cmd_decompose(args) -> int:
    graph = parse_graph_file(_read(args.graph))
    td, report = min_fill_decompose(graph)
    if args.max_width is not None and td.width > args.max_width:
        raise WidthExceeded(
            f"decomposition width {td.width} exceeds --max-width {args.max_width}"
        )
    hist = " ".join(
        f"{size}:{count}"
        for size, count in sorted(report.bag_size_histogram.items())
    )
    print(f"c width {report.width}")
    print(f"c bags {report.node_count}")
    print(f"c bag-size-histogram {hist}")
    sys.stdout.write(emit_td_file(td))
    return EXIT_OK


def _cmd_validate_td(args) -> int:
    graph = parse_graph_file(_read(args.graph))
    td = parse_td_file(_read(args.td))
    issues = validate_td(graph, td)
    if issues:
        for issue in issues:
            print(f"violation: {issue}")
        return EXIT_INPUT
    print(f"ok width {td.width}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    graph = generate(args.kind, args.n, args.k, args.seed)
    print(f"c gen {args.kind} n={args.n} k={args.k} seed={args.seed}")
    sys.stdout.write(emit_graph_file(graph))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    graph = parse_graph_file(_read(args.graph))
    model = parse_costs_file(_read(args.costs), graph.n)
    started = time.perf_counter()
    result = brute_force_solve(graph, model)
    elapsed = time.perf_counter() - started
    print(f"optimum {result.optimum}")
    print("degrees " + " ".join(str(d) for d in degrees(result.witness)))
    print(f"edges {len(result.witness.chosen)}")
    for u, v in result.witness.sorted_edges():
        print(f"edge {u} {v}")
    print(f"time {elapsed:.3f}")
    return EXIT_OK


def _cmd_crosscheck(args) -> int:
    rng = random.Random(args.seed)
    for index in range(args.count):
        graph, model = random_instance(rng, args.n_min, args.n_max)
        td, _ = min_fill_decompose(graph)
        ntd = to_nice(td, graph)
        value, tables = solve(graph, model, ntd)
        sol = reconstruct(tables)
        ref = brute_force_solve(graph, model)
        if value != ref.optimum or evaluate(model, sol) != value:
            print(f"mismatch at instance {index}")
            print(f"dp {value}")
            print(f"dp-reconstructed {evaluate(model, sol)}")
            print(f"oracle {ref.optimum}")
            print("reproducer graph:")
            sys.stdout.write(emit_graph_file(graph))
            print("reproducer costs:")
            for vid, table in enumerate(model.tables, start=1):
                print(f"{vid} table " + " ".join(str(x) for x in table))
            return EXIT_INTERNAL
    print(f"{args.count}/{args.count} match")
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes:
        raise ValueError("no sizes given")
    print("kind,n,k,width,nodes,states,seconds")
    for n in sizes:
        graph = generate(args.kind, n, args.k, args.seed)
        started = time.perf_counter()
        td, _ = min_fill_decompose(graph)
        ntd = to_nice(td, graph)
        model = parse_costs_file(f"default target {min(1, n - 1)}", graph.n)
        _, tables = solve(graph, model, ntd)
        elapsed = time.perf_counter() - started
        counts = state_count_report(tables)
        print(
            f"{args.kind},{n},{args.k},{ntd.width},{ntd.node_count},"
            f"{counts.total},{elapsed:.3f}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="degseq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance end to end")
    p_solve.add_argument("--graph", required=True, help=".gr graph file")
    p_solve.add_argument("--costs", required=True, help="cost table file")
    p_solve.add_argument("--td", help="optional .td decomposition file")
    p_solve.add_argument("--max-width", type=int, default=None)
    p_solve.add_argument("--emit-solution", help="write a solution file here")
    p_solve.add_argument("--check-oracle", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_dec = sub.add_parser("decompose", help="emit a min-fill .td decomposition")
    p_dec.add_argument("--graph", required=True)
    p_dec.add_argument("--max-width", type=int, default=None)
    p_dec.set_defaults(func=_cmd_decompose)

    p_val = sub.add_parser("validate-td", help="check a .td against a graph")
    p_val.add_argument("--graph", required=True)
    p_val.add_argument("--td", required=True)
    p_val.set_defaults(func=_cmd_validate_td)

    p_gen = sub.add_parser("gen", help="emit a generated .gr instance")
    p_gen.add_argument("kind", choices=KINDS)
    p_gen.add_argument("n", type=int)
    p_gen.add_argument("--k", type=int, default=1)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.set_defaults(func=_cmd_gen)

    p_orc = sub.add_parser("oracle", help="brute-force solve a small instance")
    p_orc.add_argument("--graph", required=True)
    p_orc.add_argument("--costs", required=True)
    p_orc.set_defaults(func=_cmd_oracle)

    p_cc = sub.add_parser(
        "crosscheck", help="compare solver and oracle on random instances"
    )
    p_cc.add_argument("--count", type=int, default=100)
    p_cc.add_argument("--seed", type=int, default=1)
    p_cc.add_argument("--n-min", type=int, default=2)
    p_cc.add_argument("--n-max", type=int, default=9)
    p_cc.set_defaults(func=_cmd_crosscheck)

    p_bench = sub.add_parser("bench", help="time generated instances, CSV output")
    p_bench.add_argument("kind", choices=KINDS)
    p_bench.add_argument("--sizes", required=True, help="comma-separated n values")
    p_bench.add_argument("--k", type=int, default=1)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WidthExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_WIDTH
    except InternalBreach as err:
        print(f"internal error: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
