"""Literals, clauses and ordered clause-sets.

A literal is a ``(var, positive)`` pair, a clause is a tuple of literals
sorted by variable, and a :class:`ClauseSet` is an ordered tuple of
distinct clauses.  Everything here is immutable.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import InvalidLiteral, UnmappedVariable


class Literal(NamedTuple):
    var: int
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def __str__(self) -> str:
        return f"{self.var}" if self.positive else f"¬{self.var}"


Clause = tuple  # tuple[Literal, ...], sorted by var


def clause_str(clause: Sequence[Literal]) -> str:
    return "{" + ",".join(str(Literal(*lit)) for lit in clause) + "}"


@dataclass(frozen=True)
class ClauseSet:
    clauses: tuple = ()

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return ClauseSet(self.clauses[i])
        return self.clauses[i]

    def __str__(self) -> str:
        if not self.clauses:
            return "∅"
        return "".join(clause_str(c) for c in self.clauses)

    def __repr__(self) -> str:
        return f"ClauseSet({str(self)!r})"

    @property
    def num_vars(self) -> int:
        return len(lit_set(self))

    @property
    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def max_var(self) -> int:
        return max((lit.var for c in self.clauses for lit in c), default=-1)


class OrderClass(enum.Enum):
    LINEARLY_ORDERED = "l.o."
    LINEARLY_ORDERED_UNSORTED = "l.o.u."
    ALMOST_ARBITRARY = "a.a."

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Block:
    head_var: int
    clauses: tuple


# ---------------------------------------------------------------- parsing

_TOKEN_NEG = ("-", "¬", "~")


def to_literal(item) -> Literal:
    """Coerce a raw literal.

    Accepted forms: a :class:`Literal` or ``(var, positive)`` pair, a
    non-negative int (positive literal of that var), a negative int ``-v``
    (negated var ``v``; var 0 can only be negated through the other forms),
    or text such as ``"3"``, ``"-3"``, ``"¬3"`` or ``"3!"``.
    """
    if isinstance(item, Literal):
        lit = item
    elif isinstance(item, tuple) and len(item) == 2:
        var, positive = item
        if isinstance(var, bool) or not isinstance(var, int) or not isinstance(positive, bool):
            raise InvalidLiteral(f"bad literal record {item!r}")
        lit = Literal(var, positive)
    elif isinstance(item, bool):
        raise InvalidLiteral(f"bad literal {item!r}")
    elif isinstance(item, int):
        lit = Literal(item, True) if item >= 0 else Literal(-item, False)
    elif isinstance(item, str):
        text = item.strip()
        negative = False
        if text.startswith(_TOKEN_NEG):
            negative, text = True, text[1:].strip()
        if text.endswith("!"):
            negative, text = True, text[:-1].strip()
        if not text.isdigit():
            raise InvalidLiteral(f"bad literal {item!r}")
        lit = Literal(int(text), not negative)
    else:
        raise InvalidLiteral(f"bad literal {item!r}")
    if lit.var < 0:
        raise InvalidLiteral(f"negative variable index in {item!r}")
    return lit


def parse_clause_set(text: str) -> ClauseSet:
    """Parse set notation like ``"{0,¬1}{0,2,-3}"`` and normalize it."""
    text = text.strip()
    if text in ("", "∅"):
        return ClauseSet()
    groups = re.findall(r"\{([^{}]*)\}", text)
    if not groups and text:
        raise InvalidLiteral(f"no clauses found in {text!r}")
    raw = []
    for g in groups:
        parts = [p for p in g.split(",") if p.strip()]
        raw.append([to_literal(p) for p in parts])
    return normalize(raw)


def normalize(raw: Iterable[Iterable]) -> ClauseSet:
    """Build a clause-set from raw clauses.

    Literals are sorted by variable and deduplicated, tautological clauses
    are dropped, and repeated clauses keep their first occurrence.  A raw
    clause with no literals is kept as an unsatisfiable empty clause.
    """
    if isinstance(raw, ClauseSet):
        raw = raw.clauses
    out = []
    seen = set()
    for raw_clause in raw:
        lits = {}
        tautology = False
        for item in raw_clause:
            lit = to_literal(item)
            prev = lits.get(lit.var)
            if prev is None:
                lits[lit.var] = lit
            elif prev.positive != lit.positive:
                tautology = True
        if tautology:
            continue
        clause = tuple(sorted(lits.values()))
        if clause in seen:
            continue
        seen.add(clause)
        out.append(clause)
    return ClauseSet(tuple(out))


# ---------------------------------------------------------- order classes


def clause_sort_key(clause: Sequence[Literal]):
    """Variables first (shorter clause wins a prefix tie), then signs with
    negative before positive."""
    return _sort_key(clause if isinstance(clause, tuple) else tuple(clause))


@lru_cache(maxsize=1 << 20)
def _sort_key(clause: tuple):
    return (tuple(lit[0] for lit in clause), tuple(lit[1] for lit in clause))


def sort_clauses(s: ClauseSet) -> ClauseSet:
    return ClauseSet(tuple(sorted(s.clauses, key=clause_sort_key)))


def is_sorted(clauses: Sequence[tuple]) -> bool:
    prev = None
    for c in clauses:
        key = clause_sort_key(c)
        if prev is not None and key < prev:
            return False
        prev = key
    return True


def new_names_increase(clauses: Sequence[tuple]) -> bool:
    """True when variables, read clause by clause and left to right, make
    their first appearance in strictly increasing order."""
    seen = set()
    last = -1
    for clause in clauses:
        for lit in clause:
            v = lit[0]
            if v not in seen:
                if v < last:
                    return False
                seen.add(v)
                last = v
    return True


def literals_sorted(clauses: Sequence[tuple]) -> bool:
    return all(all(a[0] < b[0] for a, b in zip(c, c[1:])) for c in clauses)


def is_linearly_ordered(clauses: Sequence[tuple]) -> bool:
    return is_sorted(clauses) and new_names_increase(clauses)


def classify(s: ClauseSet) -> OrderClass:
    clauses = s.clauses
    if not new_names_increase(clauses):
        return OrderClass.ALMOST_ARBITRARY
    if is_sorted(clauses):
        return OrderClass.LINEARLY_ORDERED
    return OrderClass.LINEARLY_ORDERED_UNSORTED


# ----------------------------------------------------------------- queries


def lit_set(s) -> set:
    clauses = s.clauses if isinstance(s, ClauseSet) else s
    return {lit[0] for c in clauses for lit in c}


def rcc(k: int) -> int:
    """Number of ordered arrangements of 1..k literals drawn from a k-clause."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return sum(math.perm(k, r) for r in range(1, k + 1))


def blocks_of(s: ClauseSet) -> list:
    order = []
    groups: dict = {}
    for c in s.clauses:
        if not c:
            continue
        head = c[0][0]
        if head not in groups:
            groups[head] = []
            order.append(head)
        groups[head].append(c)
    return [Block(h, tuple(groups[h])) for h in order]


def compare_clauses(c1: Sequence, c2: Sequence) -> bool:
    if len(c1) != len(c2):
        return False
    return all(a[0] == b[0] and a[1] == b[1] for a, b in zip(c1, c2))


def compare_sets(s1: ClauseSet, s2: ClauseSet) -> bool:
    if len(s1) != len(s2):
        return False
    return all(compare_clauses(a, b) for a, b in zip(s1.clauses, s2.clauses))


def evaluate_clauses(clauses: Iterable[Sequence], assignment) -> bool:
    """Direct CNF semantics; ``assignment`` is indexable by variable."""
    for c in clauses:
        if not any(bool(assignment[v]) == p for v, p in c):
            return False
    return True


# ----------------------------------------------------------------- mapping


@dataclass(frozen=True)
class Mapping:
    """Bijective renaming of variable indices."""

    pairs: tuple = ()
    _table: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        table = dict(self.pairs)
        if len(table) != len(self.pairs):
            raise ValueError("duplicate source variable in mapping")
        if len(set(table.values())) != len(table):
            raise ValueError("mapping is not injective")
        object.__setattr__(self, "pairs", tuple(sorted(table.items())))
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_dict(cls, table: dict) -> "Mapping":
        return cls(tuple(table.items()))

    @classmethod
    def identity(cls, variables: Iterable[int]) -> "Mapping":
        return cls(tuple((v, v) for v in variables))

    def __call__(self, var: int) -> int:
        try:
            return self._table[var]
        except KeyError:
            raise UnmappedVariable(var) from None

    def __contains__(self, var: int) -> bool:
        return var in self._table

    def __len__(self) -> int:
        return len(self._table)

    def as_dict(self) -> dict:
        return dict(self._table)

    @property
    def domain(self) -> set:
        return set(self._table)

    def stable_set(self) -> set:
        return {v for v, w in self._table.items() if v == w}

    def is_identity(self) -> bool:
        return all(v == w for v, w in self._table.items())

    def inverse(self) -> "Mapping":
        return Mapping(tuple((w, v) for v, w in self._table.items()))

    def then(self, other: "Mapping") -> "Mapping":
        """Apply ``self`` first, then ``other``."""
        return Mapping(tuple((v, other(w)) for v, w in self._table.items()))

    def __str__(self) -> str:
        """Pairs listed in order of their new names."""
        ordered = sorted(self.pairs, key=lambda pair: pair[1])
        return "{" + "".join(f"{{{v},{w}}}" for v, w in ordered) + "}"


def rename_clauses(clauses: Iterable[Sequence], table) -> tuple:
    """Substitute variables through ``table`` (dict or Mapping) and re-sort
    literals inside each clause; clause order is kept."""
    lookup = table._table if isinstance(table, Mapping) else table
    renamed = {}
    for v, w in lookup.items():
        renamed[(v, True)] = Literal(w, True)
        renamed[(v, False)] = Literal(w, False)
    try:
        return tuple(tuple(sorted([renamed[lit] for lit in c])) for c in clauses)
    except KeyError as exc:
        raise UnmappedVariable(exc.args[0][0]) from None


def apply_mapping(s: ClauseSet, m: Mapping) -> ClauseSet:
    return ClauseSet(rename_clauses(s.clauses, m))
