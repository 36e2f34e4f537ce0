"""DIMACS input, DOT/CSV/JSON output and run records."""

from __future__ import annotations

import csv
import io
import json
import re
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

from .cnf import ClauseSet, Literal, clause_str, normalize
from .errors import ParseError
from .resolution import Fbdd, Srt, reachable

SCHEMA_VERSION = 1
CSV_FIELDS = ("instance", "M", "N", "engine", "uniqueNodes", "bigSp", "craIters", "verdict", "ms")


class HeaderMismatch(UserWarning):
    """DIMACS header counts disagree with the body."""


# ------------------------------------------------------------------ DIMACS


def parse_dimacs(text: str) -> ClauseSet:
    """Read DIMACS CNF; variable ``v`` becomes index ``v - 1``."""
    header = None
    raw: list = []
    current: list = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c") or stripped.startswith("%"):
            continue
        if stripped.startswith("p"):
            m = re.fullmatch(r"p\s+cnf\s+(\d+)\s+(\d+)", stripped)
            if m is None or header is not None:
                raise ParseError(f"bad header {stripped!r}", line=number)
            header = (int(m.group(1)), int(m.group(2)))
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' header", line=number)
        for token in stripped.split():
            try:
                value = int(token)
            except ValueError:
                raise ParseError(f"not an integer: {token!r}", line=number) from None
            if value == 0:
                raw.append(current)
                current = []
            else:
                current.append(Literal(abs(value) - 1, value > 0))
    if header is None:
        raise ParseError("missing 'p cnf' header", line=0)
    if current:
        raw.append(current)
    seen_vars = max((lit[0] + 1 for c in raw for lit in c), default=0)
    if seen_vars > header[0] or len(raw) != header[1]:
        warnings.warn(
            f"header says {header[0]} vars / {header[1]} clauses, "
            f"body has {seen_vars} vars / {len(raw)} clauses",
            HeaderMismatch,
            stacklevel=2,
        )
    return normalize(raw)


def to_dimacs(s: ClauseSet, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {row}" for row in comment.splitlines())
    lines.append(f"p cnf {s.max_var() + 1} {len(s)}")
    for c in s.clauses:
        lines.append(" ".join(str(v + 1 if p else -(v + 1)) for v, p in c) + " 0")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------- DOT


def _terminals() -> list:
    return [
        '  n0 [label="FALSE", shape=box, peripheries=2];',
        '  n1 [label="TRUE", shape=box, peripheries=2];',
    ]


def _edge(src, dst, positive, label=None) -> str:
    attrs = ["style=solid" if positive else "style=dashed"]
    if label:
        attrs.append(f'label="{label}"')
    return f"  n{src} -> n{dst} [{', '.join(attrs)}];"


def _set_label(clauses) -> str:
    return "".join(clause_str(c) for c in clauses) or "∅"


def emit_dot(graph, name: str = "G") -> str:
    """Render a tree or diagram; solid edges are the positive branch."""
    lines = [f"digraph {name} {{"] + _terminals()
    if isinstance(graph, Fbdd):
        for nid in reachable(
            {k: _Node(*v) for k, v in graph.nodes.items()}, graph.root
        ):
            var, hi, lo = graph.nodes[nid]
            lines.append(f'  n{nid} [label="{var}"];')
            lines.append(_edge(nid, hi, True))
            lines.append(_edge(nid, lo, False))
    else:
        if isinstance(graph, Srt):
            nodes = graph.table.nodes
        else:
            graph.expand_all()
            nodes = graph.store.nodes
        for nid in reachable(nodes, graph.root):
            node = nodes[nid]
            lines.append(f'  n{nid} [label="{_set_label(node.clauses)}\\nsplit on {node.var}"];')
            for child, positive, back in (
                (node.hi, True, getattr(node, "hi_map", None)),
                (node.lo, False, getattr(node, "lo_map", None)),
            ):
                label = None
                if back is not None:
                    label = " ".join(f"{i}→{v}" for i, v in enumerate(back) if i != v)
                lines.append(_edge(nid, child, positive, label))
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class _Node:
    var: int
    hi: int
    lo: int


def dot_node_count(text: str) -> int:
    return len(re.findall(r"^\s*n\d+ \[label=", text, flags=re.MULTILINE))


# ------------------------------------------------------------- run records


@dataclass
class RunRecord:
    instance: str
    command: str
    engine: str
    M: int
    N: int
    verdict: str
    unique_nodes: Optional[int]
    per_step: list = field(default_factory=list)
    big_sp: int = 0
    n_splits: int = 0
    cn_splits: int = 0
    cra_iterations: int = 0
    ms: float = 0.0
    schema: int = SCHEMA_VERSION

    def csv_row(self) -> dict:
        return {
            "instance": self.instance,
            "M": self.M,
            "N": self.N,
            "engine": self.engine,
            "uniqueNodes": "" if self.unique_nodes is None else self.unique_nodes,
            "bigSp": self.big_sp,
            "craIters": self.cra_iterations,
            "verdict": self.verdict,
            "ms": f"{self.ms:.1f}",
        }

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def records_to_csv(records) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.csv_row())
    return out.getvalue()
