"""Aligned resolution over linearly ordered node sets.

Every internal node stores a linearly ordered clause-set in its own
variable space.  When instantiation leaves a child set that is not linearly
ordered, the child is compacted and renamed to its canonical form; the
edge then records how the child's variables map back to the parent's.
Nodes are shared through a store keyed by the stored clause tuple, so two
residual problems that agree up to renaming meet in one node.

Two constructions are provided.  ``gspra_plus`` grows the tree one clause
at a time: a new clause is appended in place wherever the node set stays
linearly ordered and the old children can be reused, and the affected
subtree is rebuilt otherwise.  ``fgpra_plus`` builds the same graph
directly from the full clause list.  Both start from the same prepared
root set, so they must agree node for node.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .cnf import (
    ClauseSet,
    Literal,
    clause_sort_key,
    is_linearly_ordered,
    new_names_increase,
    rcc,
    rename_clauses,
)
from .errors import EmptySetError, IncompleteAssignment, TooLarge
from .oracle import SAT, UNSAT, Verdict
from .renaming import _cra_plus_raw, cra_form_raw
from .resolution import (
    FALSE,
    TRUE,
    FbddBuilder,
    Fbdd,
    NodeStats,
    SplitReport,
    StepTrace,
    edges_of,
    instantiate_clause,
    instantiate_clauses,
    reachable,
    splits_from_traces,
    stats_from_traces,
)


# ------------------------------------------------------------ node order


def block_sign_sort(clauses) -> tuple:
    """Within each block, put clauses whose head sign is the block's more
    frequent one first (negative wins a tie)."""
    votes = Counter((c[0][0], c[0][1]) for c in clauses if c)
    majority = {}
    for (var, positive), n in votes.items():
        other = votes.get((var, not positive), 0)
        if n > other or (n == other and not positive):
            majority[var] = positive

    def key(c):
        if not c:
            return ((), 0, clause_sort_key(c))
        return (c[0][0], 0 if c[0][1] == majority[c[0][0]] else 1, clause_sort_key(c))

    return tuple(sorted(clauses, key=key))


def is_node_ordered(clauses, block_signs: bool = False) -> bool:
    """Linearly ordered; with ``block_signs`` a block-sign sorted set whose
    new names increase is accepted as well."""
    if is_linearly_ordered(clauses):
        return True
    if not block_signs:
        return False
    return new_names_increase(clauses) and tuple(clauses) == block_sign_sort(clauses)


def _block_sign_form(clauses):
    """Alternate block-sign sorting and first-appearance renaming until both
    are no-ops.  Returns ``(clauses, table)`` or ``None`` past the cap."""
    current = block_sign_sort(clauses)
    composed = {lit[0]: lit[0] for c in clauses for lit in c}
    for _ in range(max(4, 4 * len(clauses))):
        first_seen = list(dict.fromkeys(lit[0] for c in current for lit in c))
        table = dict(zip(first_seen, sorted(first_seen)))
        if all(k == v for k, v in table.items()):
            return current, composed
        current = block_sign_sort(rename_clauses(current, table))
        composed = {k: table[v] for k, v in composed.items()}
    return None


def settle_node(clauses, block_signs: bool = False):
    """Return ``(stored clauses, back map)``.

    ``back map`` is ``None`` when the set is kept verbatim; otherwise it is
    a tuple indexed by stored variable giving the input variable.
    """
    if is_node_ordered(clauses, block_signs):
        return tuple(clauses), None
    canonical, table = cra_form_raw(clauses)
    if block_signs:
        signed = _block_sign_form(canonical)
        if signed is not None:
            canonical = signed[0]
            table = {v: signed[1][w] for v, w in table.items()}
    back = [0] * len(table)
    for old, new in table.items():
        back[new] = old
    return canonical, tuple(back)


def _compose(inner, outer):
    """Back maps chain child -> parent -> grandparent."""
    if inner is None:
        return outer
    if outer is None:
        return inner
    return tuple(outer[v] for v in inner)


# ------------------------------------------------------------ data types


@dataclass(frozen=True)
class MsrtNode:
    id: int
    clauses: tuple
    var: int
    hi: int
    lo: int
    hi_map: Optional[tuple]
    lo_map: Optional[tuple]

    @property
    def size(self) -> int:
        return len(self.clauses)

    @property
    def rank(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def label(self) -> str:
        from .cnf import clause_str

        return "".join(clause_str(c) for c in self.clauses)


class Lcs:
    """Store of nodes keyed by their stored (canonical) clause tuple.

    A node may be registered before its children are known; such nodes sit
    in ``pending`` until expanded.
    """

    def __init__(self, limit: Optional[int] = None):
        self.entries: dict = {}
        self.nodes: dict = {}
        self.pending: dict = {}
        self.limit = limit
        self._next = 2

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, clauses) -> Optional[int]:
        return self.entries.get(clauses)

    def _claim(self, clauses) -> int:
        if self.limit is not None and len(self.entries) >= self.limit:
            raise TooLarge(f"node store reached its limit of {self.limit}")
        nid = self._next
        self._next += 1
        self.entries[clauses] = nid
        return nid

    def reserve(self, clauses) -> int:
        nid = self._claim(clauses)
        self.pending[nid] = clauses
        return nid

    def add(self, clauses, var, hi, lo) -> int:
        nid = self._claim(clauses)
        self.nodes[nid] = MsrtNode(nid, clauses, var, hi[0], lo[0], hi[1], lo[1])
        return nid


@dataclass
class Prepared:
    """Root set in its own variable space plus the way back to the input."""

    clauses: tuple
    root_map: dict  # root-space var -> input var
    first_clause: Optional[tuple]
    arrangement: Optional[tuple]
    cra_iterations: int
    num_vars: int  # width of input assignments (max input var + 1)


@dataclass
class Msrt:
    root: int
    store: Lcs
    prepared: Prepared
    root_back: Optional[tuple] = None  # extra renaming applied at the root
    step_traces: list = field(default_factory=list)
    rebuilds: int = 0
    engine: Optional["_Engine"] = None  # set when nodes are expanded on demand

    def node(self, nid: int) -> MsrtNode:
        node = self.store.nodes.get(nid)
        if node is None:
            node = self.engine.expand(nid)
        return node

    def expand_all(self) -> None:
        if self.engine is not None:
            self.engine.expand_all(self.root)

    def node_ids(self) -> list:
        self.expand_all()
        return reachable(self.store.nodes, self.root)

    @property
    def unique_non_leaf(self) -> int:
        return len(self.node_ids())

    def _root_lookup(self) -> list:
        size = max((v + 1 for v in self.prepared.root_map), default=1)
        base = [None] * size
        for v, orig in self.prepared.root_map.items():
            base[v] = orig
        if self.root_back is None:
            return base
        return [base[v] for v in self.root_back]

    def evaluate(self, assignment) -> bool:
        lookup = self._root_lookup()
        nid = self.root
        while nid not in (TRUE, FALSE):
            node = self.node(nid)
            try:
                value = assignment[lookup[node.var]]
            except (IndexError, KeyError, TypeError):
                raise IncompleteAssignment(f"no value for variable {node.var}") from None
            if value is None:
                raise IncompleteAssignment(f"no value for variable {node.var}")
            if value:
                nid, back = node.hi, node.hi_map
            else:
                nid, back = node.lo, node.lo_map
            if back is not None:
                lookup = [lookup[v] for v in back]
        return nid == TRUE


# ---------------------------------------------------------- construction


class _Engine:
    def __init__(self, store: Lcs, block_signs: bool = False, lazy: bool = False):
        self.store = store
        self.block_signs = block_signs
        self.lazy = lazy
        self.memo: dict = {}
        self.images: dict = {}
        self.n_witnesses: list = []
        self.rebuilds = 0

    def settle_child(self, raw):
        if raw is True:
            return TRUE, None
        if raw is False:
            return FALSE, None
        clauses, back = settle_node(raw, self.block_signs)
        nid = self.node_for(clauses)
        if not self.lazy:
            self.expand_all(nid)
        return nid, back

    def node_for(self, clauses) -> int:
        """Node id for a stored set, registering it unexpanded if new."""
        if not clauses:
            return TRUE
        if not clauses[0]:
            return FALSE
        found = self.store.get(clauses)
        if found is not None:
            return found
        return self.store.reserve(clauses)

    def expand(self, nid: int) -> MsrtNode:
        node = self.store.nodes.get(nid)
        if node is not None:
            return node
        clauses = self.store.pending.pop(nid)
        var = clauses[0][0][0]
        hi = self._child(instantiate_clauses(clauses, var, True))
        lo = self._child(instantiate_clauses(clauses, var, False))
        node = MsrtNode(nid, clauses, var, hi[0], lo[0], hi[1], lo[1])
        self.store.nodes[nid] = node
        return node

    def _child(self, raw):
        if raw is True:
            return TRUE, None
        if raw is False:
            return FALSE, None
        clauses, back = settle_node(raw, self.block_signs)
        return self.node_for(clauses), back

    def expand_all(self, root: int) -> None:
        stack = [root]
        pending = self.store.pending
        while stack:
            nid = stack.pop()
            if nid in pending:
                node = self.expand(nid)
                stack.append(node.lo)
                stack.append(node.hi)

    def build(self, clauses) -> int:
        nid = self.node_for(clauses)
        self.expand_all(nid)
        return nid

    def start_step(self):
        self.memo = {}
        self.images = {}
        self.n_witnesses = []

    def align(self, nid: int, clause: tuple):
        """Add ``clause`` (in ``nid``'s space) below ``nid``.

        Returns ``(node, back map to nid's space or None)``.
        """
        if nid == FALSE:
            return FALSE, None
        key = (nid, clause)
        if key in self.memo:
            return self.memo[key]
        if nid == TRUE:
            result = self.settle_child((clause,))
        else:
            node = self.store.nodes[nid]
            if clause in node.clauses:
                result = (nid, None)
            else:
                if clause[0][0] < node.var:
                    self.n_witnesses.append((nid, clause))
                grown = node.clauses + (clause,)
                if is_node_ordered(grown, self.block_signs):
                    result = (self._extend(node, grown, clause), None)
                else:
                    self.rebuilds += 1
                    result = self.settle_child(grown)
            self.images.setdefault(nid, set()).add(result[0])
        self.memo[key] = result
        return result

    def _extend(self, node: MsrtNode, grown: tuple, clause: tuple) -> int:
        found = self.store.get(grown)
        if found is not None:
            return found
        kids = []
        for value, child, back in (
            (True, node.hi, node.hi_map),
            (False, node.lo, node.lo_map),
        ):
            rest = instantiate_clause(clause, node.var, value)
            if rest is True:
                kids.append((child, back))
            elif not rest:
                kids.append((FALSE, None))
            elif back is None:
                kids.append(self.align(child, rest))
            else:
                # the old child was renamed, so the grown child is too
                self.rebuilds += 1
                kids.append(self.settle_child(instantiate_clauses(grown, node.var, value)))
        return self.store.add(grown, node.var, kids[0], kids[1])


# ------------------------------------------------------ first clause choice


def _top_part_count(clauses, index: int, arrangement, block_signs=False, memo=None) -> int:
    if memo is None:
        memo = {}
    current = clauses
    seen = set()
    for lit in arrangement:
        var, positive = lit
        for value in (positive, not positive):
            raw = instantiate_clauses(current, var, value)
            if isinstance(raw, bool):
                continue
            stored = memo.get(raw)
            if stored is None:
                stored = memo[raw] = settle_node(raw, block_signs)[0]
            seen.add(stored)
        nxt = instantiate_clauses(current, var, not positive)
        if isinstance(nxt, bool):
            break
        current = nxt
    return len(seen)


def select_first_clause(s, block_signs: bool = False):
    """Choose the clause and literal order giving the fewest distinct nodes
    in the top part of the tree.

    Returns ``(clause, arrangement, count)``; ties go to the earlier clause,
    then to the lexicographically smaller arrangement of positions.
    """
    clauses = s.clauses if isinstance(s, ClauseSet) else tuple(s)
    if not clauses:
        raise EmptySetError("cannot choose a first clause of an empty set")
    best = None
    memo: dict = {}
    for i, c in enumerate(clauses):
        for perm in itertools.permutations(range(len(c))):
            arrangement = tuple(c[j] for j in perm)
            count = _top_part_count(clauses, i, arrangement, block_signs, memo)
            key = (count, i, perm)
            if best is None or key < best[0]:
                best = (key, c, arrangement)
    (count, _, _), clause, arrangement = best
    return clause, arrangement, count


def prepare(s: ClauseSet, first_clause: str = "select", block_signs: bool = False) -> Prepared:
    """Order and rename the input into the root set.

    ``first_clause`` is ``"select"`` (fewest top-part nodes), ``"shortest"``
    or ``"given"`` (keep the input order).
    """
    clauses = tuple(s.clauses)
    width = s.max_var() + 1
    if not clauses or any(not c for c in clauses):
        return Prepared(clauses, {}, None, None, 0, width)
    perm_table = {}
    chosen = arrangement = None
    if first_clause == "select":
        chosen, arrangement, _ = select_first_clause(clauses, block_signs)
        labels = [lit[0] for lit in chosen]
        perm_table = {lit[0]: labels[i] for i, lit in enumerate(arrangement)}
    elif first_clause == "shortest":
        chosen = min(clauses, key=len)
    elif first_clause != "given":
        raise ValueError(f"unknown first-clause strategy {first_clause!r}")
    if chosen is not None:
        i = clauses.index(chosen)
        clauses = (clauses[i],) + clauses[:i] + clauses[i + 1 :]
    variables = {lit[0] for c in clauses for lit in c}
    to_arranged = {v: perm_table.get(v, v) for v in variables}
    arranged = rename_clauses(clauses, to_arranged)
    root, table, iterations, _ = _cra_plus_raw(arranged)
    if block_signs:
        signed = _block_sign_form(root)
        if signed is not None:
            root = signed[0]
            table = {v: signed[1][w] for v, w in table.items()}
    root_map = {}
    for v in variables:
        root_map[table[to_arranged[v]]] = v
    return Prepared(root, root_map, chosen, arrangement, iterations, width)


def _snapshot(msrt: Msrt, step: int, clause, engine: Optional[_Engine]) -> StepTrace:
    ids = tuple(reachable(msrt.store.nodes, msrt.root))
    images = {}
    witnesses = ()
    if engine is not None:
        images = {k: frozenset(v) for k, v in engine.images.items()}
        witnesses = tuple(engine.n_witnesses)
    return StepTrace(step, clause, ids, tuple(edges_of(msrt.store.nodes, ids)), images, witnesses)


def gspra_plus(s: ClauseSet, first_clause: str = "select", block_signs: bool = False) -> Msrt:
    """Clause-by-clause construction."""
    prep = prepare(s, first_clause, block_signs)
    store = Lcs()
    engine = _Engine(store, block_signs)
    if not prep.clauses:
        return Msrt(TRUE, store, prep)
    if not prep.clauses[0] or any(not c for c in prep.clauses):
        return Msrt(FALSE, store, prep)
    root, back = engine.settle_child(prep.clauses[:1])
    msrt = Msrt(root, store, prep, back)
    msrt.step_traces.append(_snapshot(msrt, 1, prep.clauses[0], None))
    for step, clause in enumerate(prep.clauses[1:], start=2):
        engine.start_step()
        if msrt.root_back is not None:
            clause = _into_space(clause, msrt.root_back)
        root, back = engine.align(msrt.root, clause)
        msrt.root = root
        msrt.root_back = _compose(back, msrt.root_back)
        msrt.step_traces.append(_snapshot(msrt, step, clause, engine))
    msrt.rebuilds = engine.rebuilds
    return msrt


def _into_space(clause, back):
    forward = {old: new for new, old in enumerate(back)}
    return tuple(sorted(Literal(forward[v], p) for v, p in clause))


def fgpra_plus(
    s: ClauseSet,
    first_clause: str = "select",
    block_signs: bool = False,
    lazy: bool = False,
    limit: Optional[int] = None,
) -> Msrt:
    """Direct top-down construction from the full clause list.

    With ``lazy`` only the root is registered and nodes are expanded when a
    walk first reaches them; ``limit`` caps the number of stored nodes.
    """
    prep = prepare(s, first_clause, block_signs)
    store = Lcs(limit)
    engine = _Engine(store, block_signs, lazy)
    if not prep.clauses:
        return Msrt(TRUE, store, prep)
    if any(not c for c in prep.clauses):
        return Msrt(FALSE, store, prep)
    root, back = engine.settle_child(prep.clauses)
    msrt = Msrt(root, store, prep, back, engine=engine if lazy else None)
    if not lazy:
        msrt.step_traces.append(_snapshot(msrt, len(prep.clauses), None, None))
    return msrt


def align(msrt: Msrt, clause) -> Msrt:
    """Add one more clause, given in input variables, to a finished tree.

    Variables the tree has not seen yet get fresh root-space names.
    """
    prep = msrt.prepared
    root_map = dict(prep.root_map)
    forward = {orig: v for v, orig in root_map.items()}
    next_free = max(root_map, default=-1) + 1
    for lit in clause:
        if lit[0] not in forward:
            forward[lit[0]] = next_free
            root_map[next_free] = lit[0]
            next_free += 1
    in_root = tuple(sorted(Literal(forward[v], p) for v, p in clause))
    engine = _Engine(msrt.store)
    width = max(prep.num_vars, max((lit[0] + 1 for lit in clause), default=0))
    new_prep = Prepared(
        prep.clauses + (in_root,), root_map, prep.first_clause,
        prep.arrangement, prep.cra_iterations, width,
    )
    out = Msrt(msrt.root, msrt.store, new_prep, msrt.root_back, list(msrt.step_traces))
    if msrt.root_back is not None:
        in_root = _into_space(in_root, msrt.root_back)
    root, back = engine.align(msrt.root, in_root)
    out.root = root
    out.root_back = _compose(back, msrt.root_back)
    out.step_traces.append(_snapshot(out, len(new_prep.clauses), in_root, engine))
    out.rebuilds = msrt.rebuilds + engine.rebuilds
    return out


# ---------------------------------------------------------------- queries


def node_stats(msrt: Msrt) -> NodeStats:
    return stats_from_traces(msrt.store, msrt.root, msrt.step_traces)


def detect_splits(msrt: Msrt) -> SplitReport:
    return splits_from_traces(msrt.store, msrt.step_traces, ())


def quartic_node_bound(m: int, k: int = 3) -> int:
    r = rcc(k)
    return 3 + 3 * r * r * m**4 + r * m**3


def _paths_with_lookup(msrt: Msrt):
    """First-visit composed lookup (node var -> input var) per node."""
    msrt.expand_all()
    first = {}
    stack = [(msrt.root, msrt._root_lookup())]
    nodes = msrt.store.nodes
    while stack:
        nid, lookup = stack.pop()
        if nid in (TRUE, FALSE) or nid in first:
            continue
        first[nid] = lookup
        node = nodes[nid]
        for child, back in ((node.lo, node.lo_map), (node.hi, node.hi_map)):
            stack.append((child, lookup if back is None else [lookup[v] for v in back]))
    return first


def solve(s: ClauseSet, first_clause: str = "select") -> Verdict:
    """Search the tree depth first for a TRUE leaf, expanding nodes on
    demand, and read a model off the path."""
    if any(not c for c in s.clauses):
        return Verdict(UNSAT)
    return verdict_of(fgpra_plus(s, first_clause, lazy=True), s)


def verdict_of(msrt: Msrt, s: Optional[ClauseSet] = None) -> Verdict:
    """Verdict and model of a built (or lazily built) tree.

    Variables not fixed on the path to TRUE are set to False.
    """
    width = msrt.prepared.num_vars
    if msrt.root == TRUE:
        return Verdict(SAT, (False,) * width)
    if msrt.root == FALSE:
        return Verdict(UNSAT)
    dead = set()
    stack = [[msrt.root, msrt._root_lookup(), 0]]
    while stack:
        frame = stack[-1]
        nid, lookup, tried = frame
        if tried == 2:
            dead.add(nid)
            stack.pop()
            continue
        frame[2] += 1
        node = msrt.node(nid)
        child, back = (node.hi, node.hi_map) if tried == 0 else (node.lo, node.lo_map)
        if child == TRUE:
            model = [False] * width
            for f_nid, f_lookup, f_tried in stack:
                model[f_lookup[msrt.node(f_nid).var]] = f_tried == 1
            return Verdict(SAT, tuple(model))
        if child == FALSE or child in dead:
            continue
        stack.append([child, lookup if back is None else [lookup[v] for v in back], 0])
    return Verdict(UNSAT)


@dataclass
class AlignmentReport:
    checked: int
    not_ordered: list
    underived_tails: list
    acs: set
    acs_bound: int

    @property
    def acs_size(self) -> int:
        return len(self.acs)

    @property
    def ok(self) -> bool:
        return not self.not_ordered and not self.underived_tails and self.acs_size <= self.acs_bound


def alignment_check(msrt: Msrt, source: ClauseSet, block_signs: bool = False) -> AlignmentReport:
    """Check that node sets are ordered and that every tail clause derives
    from an input clause; collect the distinct tails."""
    nodes = msrt.store.nodes
    originals = [set(c) for c in source.clauses]
    not_ordered, underived, acs = [], [], set()
    lookups = _paths_with_lookup(msrt)
    for nid, lookup in lookups.items():
        node = nodes[nid]
        if not is_node_ordered(node.clauses, block_signs):
            not_ordered.append(nid)
        tail = node.clauses[-1]
        mapped = frozenset(Literal(lookup[v], p) for v, p in tail)
        if not any(mapped <= c for c in originals):
            underived.append(nid)
        acs.add(mapped)
    bound = rcc(3) * max(1, len(source))
    return AlignmentReport(len(lookups), not_ordered, underived, acs, bound)


def extract_fbdd(msrt: Msrt, limit: int = 1_000_000) -> Fbdd:
    """Unfold spaces into a diagram labelled by input variables."""
    builder = FbddBuilder()
    memo: dict = {}

    def visit(nid, lookup):
        if nid in (TRUE, FALSE):
            return nid
        key = (nid, tuple(lookup))
        if key in memo:
            return memo[key]
        node = msrt.node(nid)
        hi_look = lookup if node.hi_map is None else [lookup[v] for v in node.hi_map]
        lo_look = lookup if node.lo_map is None else [lookup[v] for v in node.lo_map]
        out = builder.make(lookup[node.var], visit(node.hi, hi_look), visit(node.lo, lo_look))
        memo[key] = out
        if len(memo) > limit:
            raise TooLarge(f"diagram unfolding passed {limit} nodes")
        return out

    root = visit(msrt.root, msrt._root_lookup())
    return Fbdd(root, builder.nodes)
