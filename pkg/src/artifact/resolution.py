"""Sequential resolution trees.

The tree for a clause list is grown one clause at a time.  Every internal
node holds a clause-set and branches on the first literal of its first
clause; the positive branch comes first.  Adding a clause pushes it down
every branch, instantiating it along the way: a satisfied clause stops,
a falsified one turns the branch into FALSE, and what survives is appended
to the node's set (a TRUE leaf becomes the tree of the surviving clause).
Nodes are identified by their exact clause tuple, so equal sets share one
node.  Leaf ids are fixed: ``FALSE == 0`` and ``TRUE == 1``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .cnf import ClauseSet, Literal, clause_str
from .errors import EmptySetError, IncompleteAssignment, VariableAbsent

FALSE = 0
TRUE = 1


# -------------------------------------------------------------- primitives


def instantiate_clauses(clauses, var: int, value: bool):
    """Raw instantiation; returns a clause tuple, ``True`` or ``False``."""
    out = []
    for c in clauses:
        hit = None
        for lit in c:
            if lit[0] == var:
                hit = lit
                break
        if hit is None:
            out.append(c)
            continue
        if hit[1] == value:
            continue
        reduced = tuple(lit for lit in c if lit[0] != var)
        if not reduced:
            return False
        out.append(reduced)
    if not out:
        return True
    # instantiation can make two clauses equal; keep the first
    if len(set(out)) != len(out):
        seen = set()
        out = [c for c in out if not (c in seen or seen.add(c))]
    return tuple(out)


def instantiate_clause(clause, var: int, value: bool):
    """Instantiate one clause: ``True`` if satisfied, else the reduced tuple."""
    for lit in clause:
        if lit[0] == var:
            if lit[1] == value:
                return True
            return tuple(l for l in clause if l[0] != var)
    return clause


def instantiate(s: ClauseSet, v: int, value: bool):
    """Set ``v`` to ``value``; returns a ClauseSet or a ``True``/``False`` leaf."""
    if not any(lit[0] == v for c in s.clauses for lit in c):
        raise VariableAbsent(f"variable {v} does not occur in {s}")
    result = instantiate_clauses(s.clauses, v, value)
    if isinstance(result, bool):
        return result
    return ClauseSet(result)


def least_literal(s: ClauseSet) -> Literal:
    if not s.clauses or not s.clauses[0]:
        raise EmptySetError("no head literal in an empty set or empty head clause")
    return Literal(*s.clauses[0][0])


def shortest_first(clauses) -> tuple:
    """Move the first of the shortest clauses to the front."""
    clauses = tuple(clauses)
    if not clauses:
        return clauses
    i = min(range(len(clauses)), key=lambda j: len(clauses[j]))
    return (clauses[i],) + clauses[:i] + clauses[i + 1 :]


# ------------------------------------------------------------ graph types


@dataclass(frozen=True)
class SrtNode:
    id: int
    clauses: tuple
    var: int
    hi: int
    lo: int

    @property
    def size(self) -> int:
        return len(self.clauses)

    @property
    def rank(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def label(self) -> str:
        return "".join(clause_str(c) for c in self.clauses)


class NodeTable:
    """Append-only store of nodes keyed by their exact clause tuple."""

    def __init__(self):
        self.by_key: dict = {}
        self.nodes: dict = {}
        self._next = 2

    def __len__(self) -> int:
        return len(self.nodes)

    def lookup(self, clauses) -> Optional[int]:
        return self.by_key.get(clauses)

    def add(self, clauses, var, hi, lo) -> int:
        nid = self._next
        self._next += 1
        self.nodes[nid] = SrtNode(nid, clauses, var, hi, lo)
        self.by_key[clauses] = nid
        return nid

    def build(self, clauses) -> int:
        """Top-down construction under the head-literal rule."""
        if clauses is True or clauses == ():
            return TRUE
        if clauses is False:
            return FALSE
        found = self.by_key.get(clauses)
        if found is not None:
            return found
        if not clauses[0]:
            return FALSE
        var = clauses[0][0][0]
        hi = self.build(instantiate_clauses(clauses, var, True))
        lo = self.build(instantiate_clauses(clauses, var, False))
        return self.add(clauses, var, hi, lo)


def reachable(nodes: dict, root: int) -> list:
    """Internal node ids reachable from ``root`` in depth-first preorder."""
    out = []
    seen = set()
    stack = [root]
    while stack:
        nid = stack.pop()
        if nid in (TRUE, FALSE) or nid in seen:
            continue
        seen.add(nid)
        out.append(nid)
        node = nodes[nid]
        stack.append(node.lo)
        stack.append(node.hi)
    return out


def postorder(nodes: dict, root: int) -> list:
    """Internal node ids reachable from ``root``, children before parents."""
    out = []
    seen = set()
    stack = [(root, False)]
    while stack:
        nid, expanded = stack.pop()
        if nid in (TRUE, FALSE):
            continue
        if expanded:
            out.append(nid)
            continue
        if nid in seen:
            continue
        seen.add(nid)
        node = nodes[nid]
        stack.append((nid, True))
        stack.append((node.lo, False))
        stack.append((node.hi, False))
    return out


def edges_of(nodes: dict, ids) -> list:
    out = []
    for nid in ids:
        node = nodes[nid]
        out.append((nid, True, node.hi))
        out.append((nid, False, node.lo))
    return out


@dataclass(frozen=True)
class StepTrace:
    step: int
    clause: tuple
    node_ids: tuple
    edges: tuple
    images: dict = field(default_factory=dict)
    n_witnesses: tuple = ()


@dataclass
class Srt:
    root: int
    table: NodeTable
    order: tuple
    step_traces: list = field(default_factory=list)

    @property
    def nodes(self) -> dict:
        return {nid: self.table.nodes[nid] for nid in reachable(self.table.nodes, self.root)}

    def node_ids(self) -> list:
        return reachable(self.table.nodes, self.root)

    def evaluate(self, assignment) -> bool:
        nid = self.root
        nodes = self.table.nodes
        while nid not in (TRUE, FALSE):
            node = nodes[nid]
            nid = node.hi if _value(assignment, node.var) else node.lo
        return nid == TRUE


def _value(assignment, var: int) -> bool:
    try:
        value = assignment[var]
    except (IndexError, KeyError):
        raise IncompleteAssignment(f"no value for variable {var}") from None
    if value is None:
        raise IncompleteAssignment(f"no value for variable {var}")
    return bool(value)


# ------------------------------------------------------------ construction


class _StepContext:
    def __init__(self):
        self.memo: dict = {}
        self.images: dict = defaultdict(set)
        self.n_witnesses: list = []


def _resolve(table: NodeTable, nid: int, clause: tuple, ctx: _StepContext) -> int:
    if nid == FALSE:
        return FALSE
    key = (nid, clause)
    if key in ctx.memo:
        return ctx.memo[key]
    if nid == TRUE:
        result = table.build((clause,))
    else:
        node = table.nodes[nid]
        if clause in node.clauses:
            result = nid
        else:
            if clause[0][0] < node.var:
                ctx.n_witnesses.append((nid, clause))
            grown = node.clauses + (clause,)
            result = table.lookup(grown)
            if result is None:
                kids = []
                for value, child in ((True, node.hi), (False, node.lo)):
                    rest = instantiate_clause(clause, node.var, value)
                    if rest is True:
                        kids.append(child)
                    elif not rest:
                        kids.append(FALSE)
                    else:
                        kids.append(_resolve(table, child, rest, ctx))
                result = table.add(grown, node.var, kids[0], kids[1])
        ctx.images[nid].add(result)
    ctx.memo[key] = result
    return result


def _snapshot(srt: Srt, step: int, clause, ctx: Optional[_StepContext]) -> StepTrace:
    ids = tuple(reachable(srt.table.nodes, srt.root))
    return StepTrace(
        step,
        clause,
        ids,
        tuple(edges_of(srt.table.nodes, ids)),
        {k: frozenset(v) for k, v in ctx.images.items()} if ctx else {},
        tuple(ctx.n_witnesses) if ctx else (),
    )


def single_clause_srt(c) -> Srt:
    c = tuple(c)
    table = NodeTable()
    root = table.build((c,))
    srt = Srt(root, table, (c,))
    srt.step_traces.append(_snapshot(srt, 1, c, None))
    return srt


def resolve_clause(irt: Srt, c) -> Srt:
    """Push clause ``c`` through ``irt``; the result shares ``irt``'s table."""
    c = tuple(c)
    ctx = _StepContext()
    if not c:
        root = FALSE
    else:
        root = _resolve(irt.table, irt.root, c, ctx)
    srt = Srt(root, irt.table, irt.order + (c,), list(irt.step_traces))
    srt.step_traces.append(_snapshot(srt, len(srt.order), c, ctx))
    return srt


def gspra(s: ClauseSet) -> Srt:
    """Grow the tree clause by clause, shortest clause first."""
    order = shortest_first(s.clauses)
    if not order:
        return Srt(TRUE, NodeTable(), ())
    srt = single_clause_srt(order[0]) if order[0] else Srt(FALSE, NodeTable(), (order[0],))
    for c in order[1:]:
        srt = resolve_clause(srt, c)
    return srt


def build_topdown(clauses) -> Srt:
    """Reference construction straight from the final clause list."""
    table = NodeTable()
    clauses = tuple(clauses)
    root = table.build(clauses) if clauses else TRUE
    return Srt(root, table, clauses)


# -------------------------------------------------------------- diagrams


@dataclass
class Fbdd:
    """Variable-labelled branching program; ``nodes[id] = (var, hi, lo)``."""

    root: int
    nodes: dict

    def evaluate(self, assignment) -> bool:
        nid = self.root
        while nid not in (TRUE, FALSE):
            var, hi, lo = self.nodes[nid]
            nid = hi if _value(assignment, var) else lo
        return nid == TRUE

    def __len__(self) -> int:
        return len(self.nodes)


class FbddBuilder:
    def __init__(self):
        self.unique: dict = {}
        self.nodes: dict = {}

    def make(self, var: int, hi: int, lo: int) -> int:
        key = (var, hi, lo)
        nid = self.unique.get(key)
        if nid is None:
            nid = len(self.nodes) + 2
            self.unique[key] = nid
            self.nodes[nid] = key
        return nid


def extract_fbdd(srt: Srt) -> Fbdd:
    builder = FbddBuilder()
    memo = {TRUE: TRUE, FALSE: FALSE}
    nodes = srt.table.nodes
    for nid in postorder(nodes, srt.root):
        node = nodes[nid]
        memo[nid] = builder.make(node.var, memo[node.hi], memo[node.lo])
    return Fbdd(memo[srt.root], builder.nodes)


def read_once_violations(fbdd: Fbdd) -> list:
    """Nodes whose label reappears somewhere below them."""
    below: dict = {TRUE: frozenset(), FALSE: frozenset()}
    bad = []
    for nid in postorder({k: _Triple(*v) for k, v in fbdd.nodes.items()}, fbdd.root):
        var, hi, lo = fbdd.nodes[nid]
        under = below[hi] | below[lo]
        if var in under:
            bad.append(nid)
        below[nid] = under | {var}
    return bad


@dataclass(frozen=True)
class _Triple:
    var: int
    hi: int
    lo: int


def is_read_once(fbdd: Fbdd) -> bool:
    return not read_once_violations(fbdd)


def ancestor_violations(srt: Srt) -> list:
    """Nodes whose clause-set mentions the edge variable of an ancestor."""
    nodes = srt.table.nodes
    bad = []
    seen = set()

    def walk(nid, above):
        if nid in (TRUE, FALSE):
            return
        key = (nid, above)
        if key in seen:
            return
        seen.add(key)
        node = nodes[nid]
        if any(lit[0] in above for c in node.clauses for lit in c):
            bad.append(nid)
        nxt = above | {node.var}
        walk(node.hi, nxt)
        walk(node.lo, nxt)

    walk(srt.root, frozenset())
    return bad


def evaluate(d, assignment) -> bool:
    return d.evaluate(assignment)


# ------------------------------------------------------------ diagnostics


@dataclass(frozen=True)
class CommonNode:
    node: int
    kind: str  # "HCN", "MCN", "TCN" or "unknown"
    trivial: bool
    origin: Optional[int]
    ambiguous: bool
    parents: tuple


def _in_edges(edges) -> dict:
    incoming = defaultdict(list)
    for parent, value, child in edges:
        if child not in (TRUE, FALSE):
            incoming[child].append((parent, value))
    return incoming


def _classify_common(node: SrtNode, order, incoming) -> CommonNode:
    lead = node.clauses[0]
    origins = [i for i, c in enumerate(order) if set(lead) <= set(c)]
    kind, origin = "unknown", None
    if origins:
        origin = origins[0]
        source = order[origin]
        pos = [lit[0] for lit in source].index(node.var)
        if pos == 0:
            kind = "HCN"
        elif pos == len(source) - 1:
            kind = "TCN"
        else:
            kind = "MCN"
    parents = tuple(incoming)
    trivial = len({p for p, _ in incoming}) == 1
    return CommonNode(node.id, kind, trivial, origin, len(origins) > 1, parents)


def _common_in(table: NodeTable, edges, order) -> list:
    incoming = _in_edges(edges)
    out = []
    for nid in sorted(incoming):
        if len(incoming[nid]) >= 2:
            out.append(_classify_common(table.nodes[nid], order, incoming[nid]))
    return out


def detect_common_nodes(srt: Srt, step: Optional[int] = None) -> list:
    """Nodes with two or more incoming edges, at the final or a given step."""
    if step is None:
        ids = reachable(srt.table.nodes, srt.root)
        edges = edges_of(srt.table.nodes, ids)
        order = srt.order
    else:
        trace = srt.step_traces[step - 1]
        edges = trace.edges
        order = srt.order[:step]
    return _common_in(srt.table, edges, order)


@dataclass(frozen=True)
class CnSplit:
    step: int
    node: int
    size: int
    rank: int
    kind: str
    trivial: bool
    images: tuple
    nested: bool = False


@dataclass
class SplitReport:
    n_splits: list = field(default_factory=list)  # (step, node, clause)
    cn_splits: list = field(default_factory=list)
    big_sp_count: int = 0

    @property
    def n_split_count(self) -> int:
        return len(self.n_splits)

    @property
    def top_level_cn_splits(self) -> list:
        return [s for s in self.cn_splits if not s.nested]


def splits_from_traces(table, traces, order) -> SplitReport:
    report = SplitReport()
    for prev, cur in zip(traces, traces[1:]):
        for nid, clause in cur.n_witnesses:
            report.n_splits.append((cur.step, nid, clause))
        still_there = set(cur.node_ids)
        for cn in _common_in(table, prev.edges, order[: prev.step]):
            images = set(cur.images.get(cn.node, ()))
            if cn.node in still_there:
                images.add(cn.node)
            if len(images) >= 2:
                node = table.nodes[cn.node]
                report.cn_splits.append(
                    CnSplit(cur.step, cn.node, node.size, node.rank, cn.kind,
                            cn.trivial, tuple(sorted(images)))
                )
    _mark_nested(table, report)
    report.big_sp_count = report.n_split_count + sum(
        1 for s in report.top_level_cn_splits if s.rank >= 3 or s.size > 1
    )
    return report


def _mark_nested(table, report: SplitReport) -> None:
    """Flag splits of nodes lying below another node split in the same step."""
    by_step = defaultdict(list)
    for i, split in enumerate(report.cn_splits):
        by_step[split.step].append(i)
    for indices in by_step.values():
        split_nodes = {report.cn_splits[i].node for i in indices}
        below = set()
        for nid in split_nodes:
            node = table.nodes[nid]
            for child in (node.hi, node.lo):
                below.update(reachable(table.nodes, child))
        for i in indices:
            split = report.cn_splits[i]
            if split.node in below:
                report.cn_splits[i] = CnSplit(**{**split.__dict__, "nested": True})


def detect_splits(srt: Srt) -> SplitReport:
    return splits_from_traces(srt.table, srt.step_traces, srt.order)


@dataclass
class NodeStats:
    unique_non_leaf: int
    by_size: dict
    per_step: list  # (step, unique count, new nodes, expansion rate)

    @property
    def per_step_counts(self) -> list:
        return [count for _, count, _, _ in self.per_step]


def stats_from_traces(table, root, traces) -> NodeStats:
    ids = reachable(table.nodes, root)
    by_size = Counter(len(table.nodes[i].clauses) for i in ids)
    per_step = []
    prev_ids: set = set()
    prev_count = None
    for t in traces:
        count = len(t.node_ids)
        new = len(set(t.node_ids) - prev_ids)
        rate = count / prev_count if prev_count else None
        per_step.append((t.step, count, new, rate))
        prev_ids, prev_count = set(t.node_ids), count
    return NodeStats(len(ids), dict(sorted(by_size.items())), per_step)


def node_stats(srt: Srt) -> NodeStats:
    return stats_from_traces(srt.table, srt.root, srt.step_traces)
