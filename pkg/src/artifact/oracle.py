"""Ground truth and instance generation.

Exhaustive truth tables, a brute-force satisfiability oracle, random
k-SAT instances, projective-plane blocking-set instances and two ways of
cutting long clauses down to three literals.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .cnf import ClauseSet, Literal, evaluate_clauses, normalize, parse_clause_set
from .errors import InfeasibleParameters, TooManyVariables, UnsupportedOrder

MAX_TABLE_VARS = 24

SAT = "SAT"
UNSAT = "UNSAT"


@dataclass(frozen=True)
class Verdict:
    status: str
    model: Optional[tuple] = None

    @property
    def satisfiable(self) -> bool:
        return self.status == SAT


@dataclass(frozen=True)
class TruthTable:
    """Row ``r`` assigns var ``v`` the bit ``v`` of ``r`` counted from the
    most significant end."""

    num_vars: int
    values: np.ndarray

    def row(self, r: int) -> tuple:
        return assignment_of_row(r, self.num_vars)


def assignment_of_row(r: int, n: int) -> tuple:
    return tuple(bool((r >> (n - 1 - v)) & 1) for v in range(n))


def table_width(s: ClauseSet) -> int:
    return s.max_var() + 1


def truth_table(s: ClauseSet, num_vars: Optional[int] = None) -> TruthTable:
    n = table_width(s) if num_vars is None else num_vars
    if n > MAX_TABLE_VARS:
        raise TooManyVariables(f"{n} variables exceed the exhaustive limit")
    rows = np.arange(1 << n, dtype=np.int64)
    columns = {}
    values = np.ones(1 << n, dtype=bool)
    for clause in s.clauses:
        sat = np.zeros(1 << n, dtype=bool)
        for v, positive in clause:
            col = columns.get(v)
            if col is None:
                col = ((rows >> (n - 1 - v)) & 1).astype(bool)
                columns[v] = col
            sat |= col if positive else ~col
        values &= sat
    return TruthTable(n, values)


def brute_force_sat(s: ClauseSet) -> Verdict:
    table = truth_table(s)
    hits = np.flatnonzero(table.values)
    if hits.size == 0:
        return Verdict(UNSAT)
    return Verdict(SAT, table.row(int(hits[0])))


def check_model(s: ClauseSet, model) -> bool:
    return evaluate_clauses(s.clauses, model)


# ---------------------------------------------------------------- instances


def random_instance(seed, n: int, m: int, k: int) -> ClauseSet:
    if n < 1 or m < 1 or k < 1:
        raise InfeasibleParameters("n, m and k must all be at least 1")
    if k > n or m > math.comb(n, k) * (1 << k):
        raise InfeasibleParameters(f"cannot draw {m} distinct {k}-clauses over {n} vars")
    rng = random.Random(seed)
    seen = set()
    clauses = []
    while len(clauses) < m:
        variables = sorted(rng.sample(range(n), k))
        clause = tuple(Literal(v, rng.random() < 0.5) for v in variables)
        if clause not in seen:
            seen.add(clause)
            clauses.append(clause)
    return ClauseSet(tuple(clauses))


def random_suite(seed, count: int, n_range=(3, 10), m_range=(1, 40), k: int = 3) -> list:
    """Seeded batch of random instances with sizes drawn from the ranges."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(*n_range)
        m = rng.randint(*m_range)
        kk = min(k, n)
        if m > math.comb(n, kk) * (1 << kk):
            continue
        out.append(random_instance(rng.randrange(1 << 30), n, m, kk))
    return out


def pigeonhole(pigeons: int, holes: int) -> ClauseSet:
    """Every pigeon sits in a hole and no hole holds two pigeons."""

    def var(p, h):
        return p * holes + h

    raw = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p1, p2 in itertools.combinations(range(pigeons), 2):
            raw.append([Literal(var(p1, h), False), Literal(var(p2, h), False)])
    return normalize(raw)


# ---------------------------------------------------------- projective planes


@dataclass(frozen=True)
class PlaneInstance:
    order: int
    lines: tuple

    @property
    def points(self) -> int:
        return self.order * self.order + self.order + 1


def _read_lines(name: str) -> tuple:
    text = resources.files("artifact").joinpath("data", name).read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            rows.append(tuple(int(x) for x in line.split()))
    return tuple(rows)


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def _algebraic_plane(q: int) -> tuple:
    points = []
    for x in range(q):
        for y in range(q):
            points.append((x, y, 1))
    for x in range(q):
        points.append((x, 1, 0))
    points.append((1, 0, 0))
    index = {p: i for i, p in enumerate(points)}
    lines = []
    for a, b, c in points:
        line = tuple(
            sorted(
                index[p]
                for p in points
                if (a * p[0] + b * p[1] + c * p[2]) % q == 0
            )
        )
        lines.append(line)
    del index
    return tuple(sorted(lines))


def projective_plane(q: int, algebraic: bool = False) -> PlaneInstance:
    if not algebraic and q == 2:
        return PlaneInstance(2, _read_lines("pg2.txt"))
    if not algebraic and q == 3:
        return PlaneInstance(3, _read_lines("pg3.txt"))
    if not _is_prime(q):
        raise UnsupportedOrder(f"order {q} is neither tabulated nor prime")
    return PlaneInstance(q, _algebraic_plane(q))


def plane_axioms_hold(plane: PlaneInstance) -> bool:
    n = plane.points
    lines = [set(line) for line in plane.lines]
    if len(lines) != n or any(len(line) != plane.order + 1 for line in lines):
        return False
    for a, b in itertools.combinations(lines, 2):
        if len(a & b) != 1:
            return False
    for p, r in itertools.combinations(range(n), 2):
        if sum(1 for line in lines if p in line and r in line) != 1:
            return False
    return all(sum(1 for line in lines if p in line) == plane.order + 1 for p in range(n))


def blocking_set_cnf(plane: PlaneInstance) -> ClauseSet:
    """One positive clause per line: the chosen points must meet every line."""
    return normalize([list(line) for line in plane.lines])


def stored_pg3_three_sat() -> ClauseSet:
    """The published 63-variable, 51-clause 3-SAT listing, kept verbatim."""
    text = resources.files("artifact").joinpath("data", "pg3_three_sat.txt").read_text()
    body = "".join(l for l in text.splitlines() if not l.startswith("#"))
    return parse_clause_set(body)


# ------------------------------------------------------ k-SAT to 3-SAT


def _pairing(clause: list, fresh) -> list:
    out = []
    current = clause
    while len(current) > 3:
        carried = []
        for i in range(0, len(current) - 1, 2):
            x = fresh()
            out.append([current[i], current[i + 1], Literal(x, False)])
            carried.append(Literal(x, True))
        if len(current) % 2:
            carried.append(current[-1])
        current = carried
    out.append(current)
    return out


def _chain(clause: list, fresh) -> list:
    if len(clause) <= 3:
        return [clause]
    out = []
    z = fresh()
    out.append([clause[0], clause[1], Literal(z, True)])
    rest = clause[2:]
    while len(rest) > 2:
        nz = fresh()
        out.append([Literal(z, False), rest[0], Literal(nz, True)])
        z, rest = nz, rest[1:]
    out.append([Literal(z, False)] + rest)
    return out


def to_three_sat(s: ClauseSet, mode: str = "pairing") -> ClauseSet:
    """Cut clauses longer than three literals using fresh variables.

    ``pairing`` guards consecutive literal pairs with fresh variables
    ``(a or b or not x)`` and recurses on the clause of fresh variables plus
    any odd leftover.  ``chain`` links the literals through a chain of
    fresh variables.  Fresh indices continue after the largest input index
    in first-use order.
    """
    if mode not in ("pairing", "chain"):
        raise ValueError(f"unknown mode {mode!r}")
    counter = itertools.count(s.max_var() + 1)
    split = _pairing if mode == "pairing" else _chain
    raw = []
    for clause in s.clauses:
        raw.extend(split(list(clause), lambda: next(counter)))
    return normalize(raw)


def restrict_model(model, num_vars: int) -> tuple:
    return tuple(model[:num_vars])
