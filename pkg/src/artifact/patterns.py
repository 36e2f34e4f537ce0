"""Run-length truth patterns.

A pattern is a sequence of segments.  ``Bits(z, o)`` stands for ``z`` zeros
followed by ``o`` ones, ``Run(c, body)`` for ``body`` repeated ``c`` times.
Text notation juxtaposes segments and writes ``k(x)`` for k copies of x,
so ``2(16(0)16(1))`` is one run of two copies of sixteen zeros then sixteen
ones.  OR/AND/XOR work on the structure directly: operands are aligned on
common repetition counts first, then cut along the segment boundaries of
the coarser operand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, LengthMismatch, ParseError, TooLarge

EXPAND_LIMIT = 1 << 20


@dataclass(frozen=True)
class Bits:
    zeros: int
    ones: int


@dataclass(frozen=True)
class Run:
    count: int
    body: tuple


# ------------------------------------------------------------ measurements


@lru_cache(maxsize=None)
def seq_length(seq: tuple) -> int:
    total = 0
    for seg in seq:
        if isinstance(seg, Bits):
            total += seg.zeros + seg.ones
        else:
            total += seg.count * seq_length(seg.body)
    return total


@lru_cache(maxsize=None)
def seq_ones(seq: tuple) -> int:
    total = 0
    for seg in seq:
        if isinstance(seg, Bits):
            total += seg.ones
        else:
            total += seg.count * seq_ones(seg.body)
    return total


# ---------------------------------------------------------- canonical form


def _merge_bits(a: Bits, b: Bits):
    if a.ones == 0:
        return Bits(a.zeros + b.zeros, b.ones)
    if a.zeros == 0 and b.zeros == 0:
        return Bits(0, a.ones + b.ones)
    return None


def _push(out: list, seg) -> None:
    if out:
        last = out[-1]
        if isinstance(last, Bits) and isinstance(seg, Bits):
            merged = _merge_bits(last, seg)
            if merged is not None:
                out[-1] = merged
                return
        if isinstance(last, Run) and isinstance(seg, Run) and last.body == seg.body:
            out[-1] = Run(last.count + seg.count, last.body)
            return
    out.append(seg)


def canon(segments: Iterable) -> tuple:
    """Collapse trivial runs, flatten nested single runs, merge neighbours."""
    out: list = []
    for seg in segments:
        if isinstance(seg, Bits):
            if seg.zeros or seg.ones:
                _push(out, seg)
            continue
        body = canon(seg.body)
        count = seg.count
        if count == 0 or not body:
            continue
        while len(body) == 1 and isinstance(body[0], Run):
            count *= body[0].count
            body = body[0].body
        if len(body) == 1 and isinstance(body[0], Bits):
            b = body[0]
            if b.ones == 0:
                _push(out, Bits(count * b.zeros, 0))
                continue
            if b.zeros == 0:
                _push(out, Bits(0, count * b.ones))
                continue
        if count == 1:
            for inner in body:
                _push(out, inner)
            continue
        _push(out, Run(count, body))
    return tuple(out)


# --------------------------------------------------------------- rendering


def render(seq: tuple) -> str:
    parts = []
    for seg in seq:
        if isinstance(seg, Bits):
            if seg.zeros:
                parts.append(f"{seg.zeros}(0)")
            if seg.ones:
                parts.append(f"{seg.ones}(1)")
        else:
            parts.append(f"{seg.count}({render(seg.body)})")
    return "".join(parts)


def _parse_seq(text: str, pos: int, depth: int):
    items = []
    while pos < len(text) and text[pos] != ")":
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise ParseError(f"expected a count at offset {pos} in {text!r}")
        count = int(text[start:pos])
        if pos >= len(text) or text[pos] != "(":
            raise ParseError(f"expected '(' at offset {pos} in {text!r}")
        pos += 1
        if text.startswith("0)", pos):
            items.append(Bits(count, 0))
            pos += 2
        elif text.startswith("1)", pos):
            items.append(Bits(0, count))
            pos += 2
        else:
            body, pos = _parse_seq(text, pos, depth + 1)
            if pos >= len(text) or text[pos] != ")":
                raise ParseError(f"unbalanced parentheses in {text!r}")
            pos += 1
            items.append(Run(count, tuple(body)))
    if depth == 0 and pos != len(text):
        raise ParseError(f"unexpected ')' at offset {pos} in {text!r}")
    return items, pos


# ------------------------------------------------------------- expansion


def expand_seq(seq: tuple) -> np.ndarray:
    n = seq_length(seq)
    if n > EXPAND_LIMIT:
        raise TooLarge(f"pattern of length {n} exceeds the expansion limit")
    return _expand(seq)


@lru_cache(maxsize=4096)
def _expand_cached(seq: tuple) -> bytes:
    return _expand(seq).tobytes()


def _expand(seq: tuple) -> np.ndarray:
    chunks = []
    for seg in seq:
        if isinstance(seg, Bits):
            chunks.append(np.zeros(seg.zeros, dtype=bool))
            chunks.append(np.ones(seg.ones, dtype=bool))
        else:
            chunks.append(np.tile(_expand(seg.body), seg.count))
    if not chunks:
        return np.zeros(0, dtype=bool)
    return np.concatenate(chunks)


def from_bits(bits) -> tuple:
    """Run-length encode an explicit bit vector (no repetition detection)."""
    out = []
    bits = [bool(b) for b in bits]
    i = 0
    while i < len(bits):
        j = i
        while j < len(bits) and not bits[j]:
            j += 1
        k = j
        while k < len(bits) and bits[k]:
            k += 1
        out.append(Bits(j - i, k - j))
        i = k
    return canon(out)


# --------------------------------------------------------- structural ops


def _slice(seq: tuple, start: int, end: int) -> tuple:
    out = []
    offset = 0
    for seg in seq:
        if offset >= end:
            break
        if isinstance(seg, Bits):
            seg_len = seg.zeros + seg.ones
            lo, hi = max(start, offset), min(end, offset + seg_len)
            if lo < hi:
                z_lo, z_hi = lo - offset, hi - offset
                zeros = max(0, min(z_hi, seg.zeros) - z_lo)
                ones = (z_hi - z_lo) - zeros
                if zeros and ones:
                    out.append(Bits(zeros, ones))
                elif zeros:
                    out.append(Bits(zeros, 0))
                else:
                    out.append(Bits(0, ones))
            offset += seg_len
            continue
        unit = seq_length(seg.body)
        seg_len = unit * seg.count
        lo, hi = max(start, offset), min(end, offset + seg_len)
        if lo < hi:
            first_rep, first_off = divmod(lo - offset, unit)
            last_rep, last_off = divmod(hi - offset, unit)
            if first_rep == last_rep:
                out.extend(_slice(seg.body, first_off, last_off))
            else:
                if first_off:
                    out.extend(_slice(seg.body, first_off, unit))
                    first_rep += 1
                if last_rep > first_rep:
                    out.append(Run(last_rep - first_rep, seg.body))
                if last_off:
                    out.extend(_slice(seg.body, 0, last_off))
        offset += seg_len
    return canon(out)


def _piece_count(seq: tuple) -> int:
    if len(seq) == 1:
        seg = seq[0]
        if isinstance(seg, Run):
            return seg.count * max(1, len(seg.body))
        return 2 if (seg.zeros and seg.ones) else 1
    return len(seq)


def _pieces(seq: tuple):
    """Yield ``(start, end, piece)`` cutting ``seq`` one level down."""
    if len(seq) == 1:
        seg = seq[0]
        if isinstance(seg, Run):
            unit = seq_length(seg.body)
            for r in range(seg.count):
                yield r * unit, (r + 1) * unit, seg.body
            return
        yield 0, seg.zeros, (Bits(seg.zeros, 0),)
        yield seg.zeros, seg.zeros + seg.ones, (Bits(0, seg.ones),)
        return
    offset = 0
    for seg in seq:
        n = seq_length((seg,))
        yield offset, offset + n, (seg,)
        offset += n


def _regroup(seg: Run, factor: int) -> tuple:
    return canon((Run(factor, seg.body),))


@lru_cache(maxsize=200_000)
def _combine(op: str, a: tuple, b: tuple) -> tuple:
    n = seq_length(a)
    ones_a, ones_b = seq_ones(a), seq_ones(b)
    const_a = 0 if ones_a == 0 else (1 if ones_a == n else None)
    const_b = 0 if ones_b == 0 else (1 if ones_b == n else None)
    zeros, ones = (Bits(n, 0),), (Bits(0, n),)
    if const_a is not None or const_b is not None:
        if const_a is None:
            a, b, const_a, const_b = b, a, const_b, const_a
        if op == "or":
            return ones if const_a == 1 else b
        if op == "and":
            return b if const_a == 1 else zeros
        # xor
        if const_a == 0:
            return b
        if const_b is not None:
            return zeros if const_b == 1 else ones
        return _combine("xor", _complement(b), zeros)
    if (
        len(a) == 1
        and len(b) == 1
        and isinstance(a[0], Run)
        and isinstance(b[0], Run)
    ):
        g = math.gcd(a[0].count, b[0].count)
        if g > 1:
            inner = _combine(
                op, _regroup(a[0], a[0].count // g), _regroup(b[0], b[0].count // g)
            )
            return canon((Run(g, inner),))
    if _piece_count(b) < _piece_count(a):
        driver, other, swapped = b, a, True
    else:
        driver, other, swapped = a, b, False
    out = []
    for start, end, piece in _pieces(driver):
        part = _slice(other, start, end)
        out.extend(_combine(op, part, piece) if swapped else _combine(op, piece, part))
    return canon(out)


@lru_cache(maxsize=50_000)
def _complement(seq: tuple) -> tuple:
    out = []
    for seg in seq:
        if isinstance(seg, Bits):
            if seg.zeros:
                out.append(Bits(0, seg.zeros))
            if seg.ones:
                out.append(Bits(seg.ones, 0))
        else:
            out.append(Run(seg.count, _complement(seg.body)))
    return canon(out)


# -------------------------------------------------------------- public API


@dataclass(frozen=True)
class TruthPattern:
    segments: tuple

    @property
    def total_len(self) -> int:
        return seq_length(self.segments)

    def __str__(self) -> str:
        return render(self.segments)

    def __repr__(self) -> str:
        return f"TruthPattern({render(self.segments)!r})"

    def __or__(self, other: "TruthPattern") -> "TruthPattern":
        return pattern_or([self, other])

    def __and__(self, other: "TruthPattern") -> "TruthPattern":
        return pattern_and(self, other)

    def __invert__(self) -> "TruthPattern":
        return TruthPattern(_complement(self.segments))

    def expand(self) -> np.ndarray:
        return expand(self)

    def count_ones(self) -> int:
        return count_ones(self)


def make_pattern(segments: Iterable) -> TruthPattern:
    return TruthPattern(canon(segments))


def parse_pattern(text: str) -> TruthPattern:
    items, _ = _parse_seq(text.replace(" ", ""), 0, 0)
    return make_pattern(items)


def zeros_pattern(n_bits: int) -> TruthPattern:
    return TruthPattern((Bits(n_bits, 0),))


def ones_pattern(n_bits: int) -> TruthPattern:
    return TruthPattern((Bits(0, n_bits),))


def literal_pattern(var_index: int, n: int, positive: bool = True) -> TruthPattern:
    """Truth-table column of one literal over ``n`` variables, var 0 being
    the most significant."""
    if not 0 <= var_index < n or n > 30:
        raise IndexOutOfRange(f"variable {var_index} outside 0..{n - 1} (n <= 30)")
    half = 1 << (n - 1 - var_index)
    if positive:
        body = (Bits(half, half),)
    else:
        body = (Bits(0, half), Bits(half, 0))
    return make_pattern((Run(1 << var_index, body),))


def _check_lengths(patterns: Sequence[TruthPattern]) -> None:
    lengths = {p.total_len for p in patterns}
    if len(lengths) > 1:
        raise LengthMismatch(f"pattern lengths differ: {sorted(lengths)}")


def pattern_or(patterns: Sequence[TruthPattern]) -> TruthPattern:
    patterns = list(patterns)
    if not patterns:
        raise ValueError("pattern_or needs at least one pattern")
    _check_lengths(patterns)
    acc = patterns[0].segments
    for p in patterns[1:]:
        acc = _combine("or", acc, p.segments)
    return TruthPattern(acc)


def pattern_and(p1: TruthPattern, p2: TruthPattern) -> TruthPattern:
    _check_lengths([p1, p2])
    return TruthPattern(_combine("and", p1.segments, p2.segments))


def pattern_xor(p1: TruthPattern, p2: TruthPattern) -> TruthPattern:
    _check_lengths([p1, p2])
    return TruthPattern(_combine("xor", p1.segments, p2.segments))


def expand(p: TruthPattern) -> np.ndarray:
    return expand_seq(p.segments)


def count_ones(p: TruthPattern) -> int:
    return seq_ones(p.segments)


def _divisors(n: int) -> list:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def pattern_length(p: TruthPattern) -> int:
    """Length of the shortest unit whose repetition yields the pattern."""
    n = p.total_len
    if n <= EXPAND_LIMIT:
        bits = expand(p)
        for d in _divisors(n):
            if np.array_equal(bits, np.tile(bits[:d], n // d)):
                return d
        return n
    for d in _divisors(n):
        unit = _slice(p.segments, 0, d)
        repeated = canon((Run(n // d, unit),))
        if seq_ones(_combine("xor", p.segments, repeated)) == 0:
            return d
    return n


def clause_pattern(clause, n: int) -> TruthPattern:
    """Column of a clause: OR of its literal columns."""
    if not clause:
        return zeros_pattern(1 << n)
    return pattern_or([literal_pattern(v, n, positive) for v, positive in clause])


def cnf_pattern(clauses, n: int) -> TruthPattern:
    """Column of a clause-set: AND of its clause columns."""
    acc = ones_pattern(1 << n)
    for c in clauses:
        acc = pattern_and(acc, clause_pattern(c, n))
    return acc


def distinct_subpatterns(p: TruthPattern) -> int:
    """Number of distinct run bodies and mixed segments inside ``p``."""
    seen = set()

    def walk(seq):
        for seg in seq:
            if isinstance(seg, Run):
                if seg.body not in seen:
                    seen.add(seg.body)
                    walk(seg.body)
            elif seg.zeros and seg.ones:
                seen.add((seg,))

    walk(p.segments)
    return len(seen)
