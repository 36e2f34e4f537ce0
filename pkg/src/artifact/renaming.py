"""Connection-matrix renaming and its fixpoint iteration.

One renaming round reads the clauses in order, visits the literals of each
clause from most to least shared (ties by ascending index), records each
variable at its first visit, and hands out the set's own variable names in
ascending order to the rows in that visiting order.  Iterating rounds with
clause sorting in between drives an arbitrary set into linear order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import (
    ClauseSet,
    Literal,
    Mapping,
    clause_sort_key,
    is_linearly_ordered,
    rename_clauses,
)
from .errors import IterationCapExceeded


@dataclass(frozen=True)
class ConnectionMatrix:
    """Rows in visiting order; ``rows[i] = (var, presence per clause)``."""

    rows: tuple

    def __str__(self) -> str:
        lines = []
        for var, cells in self.rows:
            lines.append(f"{var:>3} " + " ".join("1" if x else "." for x in cells))
        return "\n".join(lines)


@dataclass(frozen=True)
class CraResult:
    set: ClauseSet
    mapping: Mapping
    matrix: ConnectionMatrix

    @property
    def stable(self) -> bool:
        return self.mapping.is_identity()


@dataclass(frozen=True)
class CraPlusResult:
    set: ClauseSet
    composed: Mapping
    iterations: int
    trace: tuple = ()


def occurrence_counts(clauses) -> dict:
    """Number of clauses containing each variable (signs ignored)."""
    counts: dict = {}
    for c in clauses:
        for lit in c:
            counts[lit[0]] = counts.get(lit[0], 0) + 1
    return counts


def rpc_order(clause, s) -> tuple:
    """Literals of ``clause`` ordered most-shared first, ties by index."""
    clauses = s.clauses if isinstance(s, ClauseSet) else s
    counts = occurrence_counts(clauses)
    return tuple(sorted(clause, key=lambda lit: (-counts.get(lit[0], 0), lit[0])))


def _visit_order(clauses) -> list:
    counts = occurrence_counts(clauses)
    rows = []
    seen = set()
    for c in clauses:
        for lit in sorted(c, key=lambda lit: (-counts[lit[0]], lit[0])):
            v = lit[0]
            if v not in seen:
                seen.add(v)
                rows.append(v)
    return rows


def _cra_table(clauses) -> dict:
    rows = _visit_order(clauses)
    return dict(zip(rows, sorted(rows)))


def connection_matrix(s) -> ConnectionMatrix:
    clauses = s.clauses if isinstance(s, ClauseSet) else s
    rows = []
    for v in _visit_order(clauses):
        rows.append((v, tuple(any(lit[0] == v for lit in c) for c in clauses)))
    return ConnectionMatrix(tuple(rows))


def cra(s: ClauseSet) -> CraResult:
    table = _cra_table(s.clauses)
    return CraResult(
        ClauseSet(rename_clauses(s.clauses, table)),
        Mapping.from_dict(table),
        connection_matrix(s),
    )


def _cra_plus_raw(clauses, cap=None):
    """Iterate renaming and sorting until neither changes the set.

    Returns ``(clauses, table, iterations, trace)`` where ``table`` maps the
    input variables to the output variables.
    """
    if cap is None:
        cap = max(4, 4 * len(clauses))
    composed = {lit[0]: lit[0] for c in clauses for lit in c}
    trace = []
    current = tuple(clauses)
    for iteration in range(1, cap + 1):
        table = _cra_table(current)
        identity = all(k == v for k, v in table.items())
        renamed = current if identity else rename_clauses(current, table)
        resorted = tuple(sorted(renamed, key=clause_sort_key))
        trace.append(resorted)
        if identity and resorted == current:
            return current, composed, iteration, trace
        if not identity:
            composed = {k: table[v] for k, v in composed.items()}
        current = resorted
    raise IterationCapExceeded(
        f"renaming did not settle within {cap} rounds", trace=trace
    )


def cra_plus(s: ClauseSet, cap=None) -> CraPlusResult:
    clauses, table, iterations, trace = _cra_plus_raw(s.clauses, cap)
    return CraPlusResult(
        ClauseSet(clauses),
        Mapping.from_dict(table),
        iterations,
        tuple(ClauseSet(t) for t in trace),
    )


def compact_table(clauses) -> dict:
    variables = sorted({lit[0] for c in clauses for lit in c})
    return {v: i for i, v in enumerate(variables)}


def cra_form_raw(clauses):
    """Canonical set plus the table from input variables to canonical ones."""
    dense = compact_table(clauses)
    result, table, _, _ = _cra_plus_raw(rename_clauses(clauses, dense))
    return result, {v: table[d] for v, d in dense.items()}


def cra_form(s: ClauseSet) -> ClauseSet:
    return ClauseSet(cra_form_raw(s.clauses)[0])


def cra_form_with_mapping(s: ClauseSet):
    clauses, table = cra_form_raw(s.clauses)
    return ClauseSet(clauses), Mapping.from_dict(table)


def settle(clauses):
    """Node normal form used by the aligned engines.

    A linearly ordered set is kept verbatim; anything else is compacted and
    renamed to its canonical form.  Returns ``(clauses, table)`` where
    ``table`` maps the input variables to the returned ones, or ``None``
    when nothing changed.
    """
    if is_linearly_ordered(clauses):
        return tuple(clauses), None
    return cra_form_raw(clauses)


__all__ = [
    "ConnectionMatrix",
    "CraResult",
    "CraPlusResult",
    "Literal",
    "occurrence_counts",
    "rpc_order",
    "connection_matrix",
    "cra",
    "cra_plus",
    "cra_form",
    "cra_form_raw",
    "cra_form_with_mapping",
    "compact_table",
    "settle",
]
