import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.cnf import Literal, normalize, parse_clause_set
from artifact.errors import IndexOutOfRange, LengthMismatch, ParseError, TooLarge
from artifact.oracle import truth_table
from artifact.patterns import (
    Bits,
    Run,
    clause_pattern,
    cnf_pattern,
    count_ones,
    expand,
    literal_pattern,
    make_pattern,
    ones_pattern,
    parse_pattern,
    pattern_and,
    pattern_length,
    pattern_or,
    pattern_xor,
    zeros_pattern,
)


def bits(text):
    return np.array([c == "1" for c in text])


@pytest.mark.parametrize(
    "index, text",
    [
        (0, "32(0)32(1)"),
        (1, "2(16(0)16(1))"),
        (2, "4(8(0)8(1))"),
        (3, "8(4(0)4(1))"),
        (4, "16(2(0)2(1))"),
        (5, "32(1(0)1(1))"),
    ],
)
def test_literal_pattern_text(index, text):
    assert str(literal_pattern(index, 6)) == text


@pytest.mark.parametrize(
    "a, b, text",
    [
        (1, 2, "2(8(0)8(1)16(1))"),
        (3, 4, "8(2(0)2(1)4(1))"),
        (0, 5, "16(1(0)1(1))32(1)"),
        (0, 1, "16(0)16(1)32(1)"),
        (2, 3, "4(4(0)4(1)8(1))"),
        (4, 5, "16(1(0)1(1)2(1))"),
    ],
)
def test_pair_union_text(a, b, text):
    assert str(pattern_or([literal_pattern(a, 6), literal_pattern(b, 6)])) == text


def test_union_with_zeros_is_identity():
    p = literal_pattern(2, 6)
    assert pattern_or([p, zeros_pattern(64)]) == p


def test_and_with_ones_is_identity():
    p = parse_pattern("2(8(0)8(1)16(1))")
    assert pattern_and(p, ones_pattern(64)) == p


def test_literal_and_its_negation_is_empty():
    assert count_ones(pattern_and(literal_pattern(0, 6), literal_pattern(0, 6, False))) == 0


def test_and_of_pair_unions_matches_bits():
    a = parse_pattern("2(8(0)8(1)16(1))")
    b = parse_pattern("8(2(0)2(1)4(1))")
    assert np.array_equal(expand(pattern_and(a, b)), expand(a) & expand(b))


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        pattern_or([literal_pattern(0, 3), literal_pattern(0, 4)])
    with pytest.raises(LengthMismatch):
        pattern_and(literal_pattern(0, 3), literal_pattern(0, 4))


def test_literal_index_guard():
    with pytest.raises(IndexOutOfRange):
        literal_pattern(6, 6)
    with pytest.raises(IndexOutOfRange):
        literal_pattern(0, 31)


def test_pattern_length_examples():
    assert pattern_length(literal_pattern(0, 6)) == 64
    assert pattern_length(literal_pattern(5, 6)) == 2
    wide = clause_pattern(parse_clause_set("{0,5}").clauses[0], 6)
    narrow = clause_pattern(parse_clause_set("{1,2}").clauses[0], 6)
    assert pattern_length(wide) > pattern_length(narrow)


@pytest.mark.parametrize("n", range(1, 9))
def test_pattern_length_of_literals(n):
    for i in range(n):
        assert pattern_length(literal_pattern(i, n)) == 2 ** (n - i)


def test_pattern_length_without_expansion():
    p = literal_pattern(3, 24)
    assert p.total_len > 1 << 20
    assert pattern_length(p) == 2 ** 21


def test_expand_examples():
    assert np.array_equal(expand(make_pattern([Bits(2, 2)])), bits("0011"))
    assert np.array_equal(expand(literal_pattern(0, 2)), bits("0011"))
    assert np.array_equal(expand(make_pattern([Run(2, (Bits(1, 1),))])), bits("0101"))


def test_expand_guard():
    with pytest.raises(TooLarge):
        expand(literal_pattern(0, 21))


def test_count_ones_examples():
    assert count_ones(ones_pattern(64)) == 64
    for n in range(1, 12):
        for i in range(n):
            assert count_ones(literal_pattern(i, n)) == 2 ** (n - 1)


def test_count_ones_matches_oracle():
    s = parse_clause_set("{1,2}{3,4}{0,5}")
    assert count_ones(cnf_pattern(s.clauses, 6)) == int(truth_table(s, 6).values.sum())


def test_parse_round_trip():
    for text in ["32(0)32(1)", "2(8(0)8(1)16(1))", "16(1(0)1(1))32(1)"]:
        assert str(parse_pattern(text)) == text


@pytest.mark.parametrize("bad", ["(", "3", "3(2)", "2(1(0)", "1(0))"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_pattern(bad)


def test_canonical_form_collapses_single_runs():
    assert make_pattern([Run(1, (Bits(2, 2),))]) == make_pattern([Bits(2, 2)])
    assert str(make_pattern([Run(2, (Run(3, (Bits(1, 1),)),))])) == "6(1(0)1(1))"


def _all_clauses(n, k_max=3):
    for k in range(1, min(k_max, n) + 1):
        for vs in itertools.combinations(range(n), k):
            for signs in itertools.product((True, False), repeat=k):
                yield tuple(Literal(v, p) for v, p in zip(vs, signs))


@pytest.mark.parametrize("n", range(1, 11))
def test_clause_patterns_exhaustive(n):
    rows = np.arange(1 << n)
    columns = {v: ((rows >> (n - 1 - v)) & 1).astype(bool) for v in range(n)}
    for clause in _all_clauses(n):
        want = np.zeros(1 << n, dtype=bool)
        for v, p in clause:
            want |= columns[v] if p else ~columns[v]
        p = clause_pattern(clause, n)
        assert np.array_equal(expand(p), want)
        assert count_ones(p) == int(want.sum())


@pytest.mark.parametrize("n", range(1, 5))
def test_pairwise_clause_algebra_exhaustive(n):
    pats = [clause_pattern(c, n) for c in _all_clauses(n)]
    for a, b in itertools.product(pats, repeat=2):
        ea, eb = expand(a), expand(b)
        assert np.array_equal(expand(pattern_or([a, b])), ea | eb)
        assert np.array_equal(expand(pattern_and(a, b)), ea & eb)
        assert np.array_equal(expand(pattern_xor(a, b)), ea ^ eb)


@st.composite
def clause_lists(draw):
    n = draw(st.integers(1, 10))
    count = draw(st.integers(1, 6))
    clauses = []
    for _ in range(count):
        k = draw(st.integers(1, min(3, n)))
        vs = sorted(draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True)))
        clauses.append(tuple(Literal(v, draw(st.booleans())) for v in vs))
    return n, clauses


@settings(max_examples=300, deadline=None)
@given(clause_lists())
def test_cnf_pattern_matches_truth_table(case):
    n, clauses = case
    s = normalize(clauses)
    p = cnf_pattern(s.clauses, n)
    table = truth_table(s, n).values
    assert np.array_equal(expand(p), table)
    assert count_ones(p) == int(table.sum())


@settings(max_examples=200, deadline=None)
@given(clause_lists(), clause_lists())
def test_union_and_intersection_match_bits(c1, c2):
    n = min(c1[0], c2[0])
    a = cnf_pattern([c for c in c1[1] if all(v < n for v, _ in c)], n)
    b = cnf_pattern([c for c in c2[1] if all(v < n for v, _ in c)], n)
    assert np.array_equal(expand(pattern_or([a, b])), expand(a) | expand(b))
    assert np.array_equal(expand(pattern_and(a, b)), expand(a) & expand(b))
    assert str(parse_pattern(str(a))) == str(a)
