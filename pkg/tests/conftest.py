import pytest

from artifact.cnf import parse_clause_set
from artifact.oracle import assignment_of_row, truth_table

GROWTH_EXAMPLE = "{0,3}{0,7}{1,2}{1,4}{5,6}{3,8}"
STEP_TRACE = "{0,¬1}{0,2,¬3}{0,4,¬5}{2,¬6}{¬3,4,5}{4,6,7}"
CRA_INPUT = "{0,5}{0,2}{1,3}{1,4}{2,3}"
FANO = "{0,1,2}{0,3,4}{0,5,6}{1,3,5}{1,4,6}{2,3,6}{2,4,5}"
TRUTH_TABLE_SET = "{¬0,1,¬2}{1,2,¬3}"


def agrees_everywhere(evaluate, s, width=None):
    """True when ``evaluate`` matches CNF semantics on every assignment."""
    table = truth_table(s, width)
    n = table.num_vars
    return all(
        evaluate(assignment_of_row(r, n)) == bool(table.values[r]) for r in range(1 << n)
    )


@pytest.fixture
def fano():
    return parse_clause_set(FANO)


# criterion number -> (title, list of (ok, detail)) filled by the acceptance suite
ACCEPTANCE: dict = {}


def record(criterion: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, (title, []))[1].append((ok, detail))
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion} {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, parts = ACCEPTANCE[number]
        ok = all(flag for flag, _ in parts)
        details = "; ".join(detail for _, detail in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number} {title}: {details}")
