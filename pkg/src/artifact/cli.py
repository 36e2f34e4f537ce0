"""Command-line front end.

Every failure prints one JSON object ``{"error": ..., "message": ...}`` on
stderr and exits with a nonzero status.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import aligned, resolution
from .cnf import ClauseSet, classify, parse_clause_set
from .errors import ArtifactError, TooLarge
from .oracle import (
    blocking_set_cnf,
    check_model,
    projective_plane,
    random_suite,
    stored_pg3_three_sat,
    to_three_sat,
)
from .patterns import literal_pattern, pattern_or
from .renaming import cra, cra_plus
from .reporting import (
    RunRecord,
    emit_dot,
    parse_dimacs,
    records_to_csv,
    to_dimacs,
)

ENGINES = ("gspra", "gspra+", "fgpra+")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def read_instance(path: str) -> ClauseSet:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    if "p cnf" in text:
        return parse_dimacs(text)
    return parse_clause_set(text)


# ------------------------------------------------------------------ runs


def run_engine(s: ClauseSet, engine: str, instance: str = "-", limit=None):
    """Build one graph and return ``(graph, RunRecord)``.

    ``limit`` caps the node store of the aligned engines; hitting it raises
    ``TooLarge``.
    """
    start = time.perf_counter()
    if engine == "gspra":
        graph = resolution.gspra(s)
        stats = resolution.node_stats(graph)
        splits = resolution.detect_splits(graph)
        verdict = "SAT" if _reaches_true(graph.table.nodes, graph.root) else "UNSAT"
        iterations = 0
    elif engine == "gspra+":
        graph = aligned.gspra_plus(s)
        stats = aligned.node_stats(graph)
        splits = aligned.detect_splits(graph)
        verdict = aligned.verdict_of(graph, s).status
        iterations = graph.prepared.cra_iterations
    elif engine == "fgpra+":
        graph = aligned.fgpra_plus(s, limit=limit)
        stats = aligned.node_stats(graph)
        splits = aligned.detect_splits(graph)
        verdict = aligned.verdict_of(graph, s).status
        iterations = graph.prepared.cra_iterations
    else:
        raise UsageError(f"unknown engine {engine!r}")
    ms = (time.perf_counter() - start) * 1000
    record = RunRecord(
        instance=instance,
        command="build",
        engine=engine,
        M=len(s),
        N=len({lit[0] for c in s.clauses for lit in c}),
        verdict=verdict,
        unique_nodes=stats.unique_non_leaf,
        per_step=list(stats.per_step_counts),
        big_sp=splits.big_sp_count,
        n_splits=splits.n_split_count,
        cn_splits=len(splits.cn_splits),
        cra_iterations=iterations,
        ms=ms,
    )
    return graph, record


def _reaches_true(nodes, root) -> bool:
    alive = {resolution.TRUE: True, resolution.FALSE: False}
    for nid in resolution.postorder(nodes, root):
        alive[nid] = alive[nodes[nid].hi] or alive[nodes[nid].lo]
    return alive[root]


BENCH_LIMIT = 250_000


def plane_prefix_records(max_m: int = 51, min_m: int = 4, limit: int = BENCH_LIMIT) -> list:
    """One fgpra+ run per clause prefix of the 63-variable plane listing.

    Once a prefix hits the node cap the remaining rows are emitted without a
    node count and with verdict ``node-limit``.
    """
    fixture = stored_pg3_three_sat()
    records = []
    capped = False
    for m in range(min_m, min(max_m, len(fixture)) + 1):
        prefix = ClauseSet(fixture.clauses[:m])
        name = f"pg3-prefix-{m}"
        record = None
        if not capped:
            try:
                _, record = run_engine(prefix, "fgpra+", instance=name, limit=limit)
            except TooLarge:
                capped = True
        if record is None:
            record = RunRecord(
                instance=name, command="bench", engine="fgpra+", M=m,
                N=len({lit[0] for c in prefix.clauses for lit in c}),
                verdict="node-limit", unique_nodes=None,
            )
        record.command = "bench"
        records.append(record)
    return records


def loglog_slope(records) -> float:
    done = [r for r in records if r.unique_nodes]
    xs = np.log([r.M for r in done])
    ys = np.log([r.unique_nodes for r in done])
    return float(np.polyfit(xs, ys, 1)[0])


# ------------------------------------------------------------- self test


_GROWTH_EXAMPLE = "{0,3}{0,7}{1,2}{1,4}{5,6}{3,8}"
_STEP_TRACE = "{0,-1}{0,2,-3}{0,4,-5}{2,-6}{-3,4,5}{4,6,7}"


def claim_ledger(quick: bool = False, max_m: int = 51, limit: int = BENCH_LIMIT) -> list:
    """Rows of ``(claim, expected, measured, status)``."""
    rows = []

    def claim(name, expected, measured, ok=None):
        if ok is None:
            ok = expected == measured
        rows.append((name, str(expected), str(measured), "pass" if ok else "deviate"))

    s = parse_clause_set("{0,5}{0,2}{1,3}{1,4}{2,3}")
    claim("renaming round output", "{0,1}{0,2}{3,4}{3,5}{2,4}", str(cra(s).set))
    claim("renaming fixpoint", "{0,1}{0,2}{2,3}{3,4}{4,5}", str(cra_plus(s).set))

    claim("first literal pattern", "32(0)32(1)", str(literal_pattern(0, 6)))
    claim(
        "pattern union of variables 1 and 2", "2(8(0)8(1)16(1))",
        str(pattern_or([literal_pattern(1, 6), literal_pattern(2, 6)])),
    )
    claim(
        "pattern union of variables 0 and 5", "16(1(0)1(1))32(1)",
        str(pattern_or([literal_pattern(0, 6), literal_pattern(5, 6)])),
    )

    per_step = resolution.node_stats(resolution.gspra(parse_clause_set(_GROWTH_EXAMPLE))).per_step_counts
    claim("growing tree step counts", "3,5,8,15", ",".join(str(per_step[i]) for i in (1, 2, 4, 5)))
    claim(
        "paired variables tree size", 6,
        resolution.node_stats(resolution.gspra(parse_clause_set("{0,1}{2,3}{4,5}"))).unique_non_leaf,
    )
    claim(
        "renamed set tree size", 7,
        resolution.node_stats(resolution.gspra(parse_clause_set("{0,1,2}{0,1,3}{3,4,5}"))).unique_non_leaf,
    )
    trace = aligned.node_stats(
        aligned.gspra_plus(parse_clause_set(_STEP_TRACE), first_clause="shortest")
    ).per_step_counts
    claim("aligned trace counts", "6,9,17,24", ",".join(str(x) for x in trace[2:]))

    lines = blocking_set_cnf(projective_plane(3))
    paired = to_three_sat(lines, "pairing")
    claim("pairing conversion size", "63 vars / 51 clauses",
          f"{paired.max_var() + 1} vars / {len(paired)} clauses")
    claim("chain conversion clauses", 26, len(to_three_sat(lines, "chain")))

    suite = random_suite(11, 30, (3, 8), (1, 24))
    big = max(aligned.detect_splits(aligned.gspra_plus(x)).big_sp_count for x in suite)
    claim("largest big-split count on aligned runs", 0, big)
    worst = max(aligned.prepare(x).cra_iterations - len(x) for x in suite)
    claim("renaming rounds minus clause count (max)", "<= 1", worst, worst <= 1)
    over = [
        x for x in suite
        if aligned.fgpra_plus(x).unique_non_leaf > aligned.quartic_node_bound(len(x))
    ]
    claim("instances above the quartic node bound", 0, len(over))

    if not quick:
        records = plane_prefix_records(max_m, limit=limit)
        full = records[-1]
        measured = full.unique_nodes if full.unique_nodes else f"above {limit} (cap hit)"
        claim("63-variable plane node count", 176839, measured)
        counts = [r.unique_nodes for r in records if r.unique_nodes]
        claim(
            "prefix counts never decrease", "nondecreasing",
            f"{sum(b < a for a, b in zip(counts, counts[1:]))} decreases",
            all(b >= a for a, b in zip(counts, counts[1:])),
        )
        slope = loglog_slope(records)
        claim("prefix growth log-log slope", "<= 4", f"{slope:.2f}", slope <= 4)
    return rows


# -------------------------------------------------------------- commands


def cmd_solve(args) -> int:
    s = read_instance(args.file)
    verdict = aligned.solve(s)
    if verdict.satisfiable and not check_model(s, verdict.model):
        raise ArtifactError("model failed verification")
    print(verdict.status)
    if verdict.model is not None:
        print(" ".join(str(v + 1 if x else -(v + 1)) for v, x in enumerate(verdict.model)))
    return 0


def cmd_classify(args) -> int:
    print(classify(read_instance(args.file)).value)
    return 0


def cmd_rename(args) -> int:
    result = cra_plus(read_instance(args.file))
    print(result.set)
    print(result.composed)
    print(f"iterations {result.iterations}")
    return 0


def cmd_build(args) -> int:
    s = read_instance(args.file)
    graph, record = run_engine(s, args.engine, instance=args.file)
    dot = emit_dot(graph)
    if args.dot:
        Path(args.dot).write_text(dot)
    else:
        sys.stdout.write(dot)
    print(record.to_json(), file=sys.stderr if not args.dot else sys.stdout)
    return 0


def cmd_plane(args) -> int:
    s = blocking_set_cnf(projective_plane(args.q))
    if args.to3sat:
        s = to_three_sat(s, args.to3sat)
    sys.stdout.write(to_dimacs(s, comment=f"blocking set of the order-{args.q} plane"))
    return 0


def cmd_bench(args) -> int:
    if not args.plane_prefix:
        raise UsageError("bench needs --plane-prefix")
    records = plane_prefix_records(args.max_m, args.min_m, args.limit)
    text = records_to_csv(records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if len(records) >= 2:
        print(f"loglog slope {loglog_slope(records):.3f}", file=sys.stderr)
    return 0


def cmd_selftest(args) -> int:
    rows = claim_ledger(quick=args.quick, max_m=args.max_m, limit=args.limit)
    width = max(len(r[0]) for r in rows)
    for name, expected, measured, status in rows:
        print(f"{status:<8} {name:<{width}}  expected {expected}  measured {measured}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="artifact", description="clause-set resolution toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="decide satisfiability and print a model")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="print the order class of a clause set")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rename", help="run the renaming fixpoint")
    p.add_argument("file")
    p.set_defaults(func=cmd_rename)

    p = sub.add_parser("build", help="build a tree and emit DOT plus a run record")
    p.add_argument("file")
    p.add_argument("--engine", choices=ENGINES, default="fgpra+")
    p.add_argument("--dot", help="write DOT here instead of stdout")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("plane", help="emit a projective-plane blocking-set CNF")
    p.add_argument("--q", type=int, choices=(2, 3), required=True)
    p.add_argument("--to3sat", choices=("pairing", "chain"))
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("bench", help="node counts on prefixes of the 63-variable plane")
    p.add_argument("--plane-prefix", action="store_true")
    p.add_argument("--min-m", type=int, default=4)
    p.add_argument("--max-m", type=int, default=51)
    p.add_argument("--limit", type=int, default=BENCH_LIMIT, help="node cap per run")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="print the claim ledger")
    p.add_argument("--quick", action="store_true", help="skip the plane runs")
    p.add_argument("--max-m", type=int, default=51)
    p.add_argument("--limit", type=int, default=BENCH_LIMIT, help="node cap per plane run")
    p.set_defaults(func=cmd_selftest)
    return parser


def _fail(kind: str, message: str, status: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail("UsageError", str(exc), 2)
    except (ArtifactError, OSError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
