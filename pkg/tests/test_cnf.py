import pytest

from artifact.cnf import (
    Block,
    ClauseSet,
    Literal,
    Mapping,
    OrderClass,
    apply_mapping,
    blocks_of,
    classify,
    compare_clauses,
    compare_sets,
    evaluate_clauses,
    lit_set,
    normalize,
    parse_clause_set,
    rcc,
    sort_clauses,
    to_literal,
)
from artifact.errors import InvalidLiteral, UnmappedVariable
from artifact.oracle import stored_pg3_three_sat

from conftest import CRA_INPUT, FANO


def P(text):
    return parse_clause_set(text)


def test_literal_text_forms():
    assert to_literal("-3") == Literal(3, False)
    assert to_literal("¬3") == Literal(3, False)
    assert to_literal("3!") == Literal(3, False)
    assert to_literal(4) == Literal(4, True)
    assert to_literal(-4) == Literal(4, False)
    assert str(Literal(2, False)) == "¬2"


@pytest.mark.parametrize("bad", ["x", "", True, 2.5, (1, "yes"), "--1"])
def test_bad_literals_rejected(bad):
    with pytest.raises(InvalidLiteral):
        to_literal(bad)


def test_normalize_sorts_and_dedupes():
    assert str(normalize([[2, 1], [1, 2]])) == "{1,2}"


def test_normalize_drops_tautology():
    assert len(normalize([[1, -1, 3]])) == 0


def test_normalize_keeps_listed_order():
    s = normalize([[0, 5], [0, 2], [1, 3], [1, 4], [2, 3]])
    assert str(s) == "{0,5}{0,2}{1,3}{1,4}{2,3}"


def test_normalize_keeps_empty_clause():
    s = normalize([[1], []])
    assert s.has_empty_clause


@pytest.mark.parametrize(
    "text, expected",
    [
        ("{0,1}{0,2}{2,3}{3,4}{4,5}", OrderClass.LINEARLY_ORDERED),
        ("{0,1}{0,2}{3,4}{3,5}{2,4}", OrderClass.LINEARLY_ORDERED_UNSORTED),
        ("{0,1}{0,2}{2,4}{3,4}{3,5}", OrderClass.ALMOST_ARBITRARY),
    ],
)
def test_classify(text, expected):
    assert classify(P(text)) is expected


def test_order_class_text():
    assert str(OrderClass.LINEARLY_ORDERED_UNSORTED) == "l.o.u."


def test_sort_clauses():
    assert str(sort_clauses(P("{3,4}{0,1}"))) == "{0,1}{3,4}"
    assert str(sort_clauses(P("{0,1}{0,2}{3,4}{3,5}{2,4}"))) == "{0,1}{0,2}{2,4}{3,4}{3,5}"


def test_sort_puts_negative_first():
    assert str(sort_clauses(P("{0,1}{¬0,1}"))) == "{¬0,1}{0,1}"


def test_lit_set():
    assert lit_set(ClauseSet()) == set()
    assert lit_set(P("{0,5}{0,2}")) == {0, 2, 5}
    assert len(lit_set(stored_pg3_three_sat())) == 63


def test_rcc():
    assert [rcc(1), rcc(2), rcc(3)] == [1, 4, 15]


def test_blocks():
    assert blocks_of(P("{0,1}{0,2}{1,3}")) == [
        Block(0, P("{0,1}{0,2}").clauses),
        Block(1, P("{1,3}").clauses),
    ]
    assert blocks_of(ClauseSet()) == []
    assert [(b.head_var, len(b.clauses)) for b in blocks_of(P(FANO))] == [(0, 3), (1, 2), (2, 2)]


def test_compare_clauses_is_positional():
    a = P("{0,1,2}").clauses[0]
    assert compare_clauses(a, a)
    assert not compare_clauses(a, (Literal(0), Literal(2), Literal(1)))
    assert not compare_clauses(P("{0,1}").clauses[0], a)


def test_compare_sets_is_positional():
    s = P(CRA_INPUT)
    assert compare_sets(s, s)
    assert not compare_sets(P("{0,1}{2,3}"), P("{2,3}{0,1}"))


def test_apply_mapping_worked_example():
    m = Mapping.from_dict({0: 0, 5: 1, 2: 2, 1: 3, 3: 4, 4: 5})
    out = apply_mapping(P(CRA_INPUT), m)
    assert str(out) == "{0,1}{0,2}{3,4}{3,5}{2,4}"
    assert apply_mapping(out, m.inverse()) == P(CRA_INPUT)


def test_identity_mapping_is_noop():
    s = P(CRA_INPUT)
    assert apply_mapping(s, Mapping.identity(range(6))) == s


def test_mapping_rejects_non_bijection():
    with pytest.raises(ValueError):
        Mapping.from_dict({0: 1, 2: 1})


def test_mapping_unmapped_variable():
    with pytest.raises(UnmappedVariable):
        Mapping.from_dict({0: 0})(3)


def test_mapping_text_lists_by_new_name():
    m = Mapping.from_dict({0: 0, 1: 1, 2: 2, 4: 3, 3: 4, 5: 5})
    assert str(m) == "{{0,0}{1,1}{2,2}{4,3}{3,4}{5,5}}"
    assert m.stable_set() == {0, 1, 2, 5}
    assert not m.is_identity()


def test_mapping_composition():
    a = Mapping.from_dict({0: 1, 1: 0})
    assert a.then(a).is_identity()


def test_evaluate_clauses():
    s = P("{¬0,1}")
    assert evaluate_clauses(s.clauses, [False, False])
    assert not evaluate_clauses(s.clauses, [True, False])
