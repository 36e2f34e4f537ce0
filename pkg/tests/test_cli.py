import json
from pathlib import Path

import pytest

from artifact.aligned import fgpra_plus, extract_fbdd
from artifact.cli import loglog_slope, main, plane_prefix_records, run_engine
from artifact.cnf import parse_clause_set
from artifact.errors import ParseError
from artifact.oracle import check_model
from artifact.reporting import (
    CSV_FIELDS,
    HeaderMismatch,
    dot_node_count,
    emit_dot,
    parse_dimacs,
    records_to_csv,
    to_dimacs,
)

from conftest import FANO, STEP_TRACE

GOLDEN = Path(__file__).parent / "golden"
P = parse_clause_set


# ------------------------------------------------------------------ DIMACS


def test_dimacs_minimal():
    assert str(parse_dimacs("p cnf 2 1\n1 -2 0\n")) == "{0,¬1}"


def test_dimacs_comments_only():
    with pytest.raises(ParseError):
        parse_dimacs("c nothing here\nc still nothing\n")


def test_dimacs_bad_token_reports_line():
    with pytest.raises(ParseError, match="line 3"):
        parse_dimacs("c x\np cnf 2 1\n1 x 0\n")


def test_dimacs_round_trip(fano):
    assert parse_dimacs(to_dimacs(fano, comment="seven lines")) == fano


def test_dimacs_header_mismatch_warns():
    with pytest.warns(HeaderMismatch):
        s = parse_dimacs("p cnf 2 3\n1 2 0\n")
    assert str(s) == "{0,1}"


# --------------------------------------------------------------------- DOT


def test_dot_single_clause():
    graph, _ = run_engine(P("{0,1,2}"), "gspra")
    assert dot_node_count(emit_dot(graph)) == 3 + 2


def test_dot_is_deterministic():
    first = emit_dot(run_engine(P(STEP_TRACE), "fgpra+")[0])
    second = emit_dot(run_engine(P(STEP_TRACE), "fgpra+")[0])
    assert first == second


def test_dot_of_diagram(fano):
    msrt = fgpra_plus(fano)
    fbdd = extract_fbdd(msrt)
    assert dot_node_count(emit_dot(fbdd)) == len(fbdd) + 2


@pytest.mark.parametrize(
    "name, text, engine",
    [
        ("disjoint_gspra.dot", "{0,1,2}{3,4,5}", "gspra"),
        ("step_trace_fgpra.dot", STEP_TRACE, "fgpra+"),
    ],
)
def test_dot_golden(name, text, engine):
    graph, _ = run_engine(P(text), engine)
    assert emit_dot(graph) == (GOLDEN / name).read_text()


# ------------------------------------------------------------- run records


def test_run_record_json():
    _, record = run_engine(P("{0,1,2}{3,4,5}"), "gspra+")
    data = json.loads(record.to_json())
    assert data["unique_nodes"] == 6 and data["verdict"] == "SAT" and data["schema"] == 1


def _without_timing(csv_text):
    return "\n".join(line.rsplit(",", 1)[0] for line in csv_text.splitlines()) + "\n"


def test_plane_prefix_csv_golden():
    text = records_to_csv(plane_prefix_records(12))
    assert text.splitlines()[0] == ",".join(CSV_FIELDS)
    assert _without_timing(text) == (GOLDEN / "plane_prefix_4_12.csv").read_text()


def test_plane_prefix_cap_fills_remaining_rows():
    records = plane_prefix_records(51, limit=200)
    assert len(records) == 48
    capped = [r for r in records if r.unique_nodes is None]
    assert capped and all(r.verdict == "node-limit" for r in capped)
    assert records_to_csv(records).splitlines()[-1].split(",")[4] == ""
    assert loglog_slope(records) > 0


# --------------------------------------------------------------------- CLI


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def test_cli_solve_dimacs(write, capsys, fano):
    path = write("fano.cnf", to_dimacs(fano))
    assert main(["solve", path]) == 0
    status, model = capsys.readouterr().out.splitlines()
    assert status == "SAT"
    values = tuple(int(x) > 0 for x in model.split())
    assert check_model(fano, values)


def test_cli_solve_unsat(write, capsys):
    assert main(["solve", write("u.txt", "{0}{¬0}")]) == 0
    assert capsys.readouterr().out.strip() == "UNSAT"


def test_cli_classify(write, capsys):
    assert main(["classify", write("s.txt", "{0,1}{2,3}{0,4}")]) == 0
    assert capsys.readouterr().out.strip() == "l.o.u."


def test_cli_rename(write, capsys):
    assert main(["rename", write("s.txt", "{0,1}{2,3}{0,4}")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "{0,1}{0,2}{3,4}"
    assert lines[-1] == "iterations 3"


def test_cli_build_writes_dot(write, tmp_path, capsys):
    dot = tmp_path / "out.dot"
    assert main(["build", "--engine", "gspra", "--dot", str(dot), write("s.txt", "{0,1,2}{3,4,5}")]) == 0
    assert dot.read_text() == (GOLDEN / "disjoint_gspra.dot").read_text()
    assert json.loads(capsys.readouterr().out)["unique_nodes"] == 6


def test_cli_plane(capsys):
    assert main(["plane", "--q", "2"]) == 0
    s = parse_dimacs(capsys.readouterr().out)
    assert len(s) == 7 and s.max_var() == 6


def test_cli_plane_chain(capsys):
    assert main(["plane", "--q", "3", "--to3sat", "chain"]) == 0
    assert len(parse_dimacs(capsys.readouterr().out)) == 26


def test_cli_bench(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--plane-prefix", "--max-m", "8", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 5
    assert "loglog slope" in capsys.readouterr().err


def test_cli_missing_file(capsys):
    assert main(["solve", "/nonexistent/file.cnf"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "FileNotFoundError"


def test_cli_parse_error(write, capsys):
    assert main(["solve", write("bad.cnf", "p cnf 1 1\n1 q 0\n")]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "ParseError"


def test_cli_usage_error(capsys):
    assert main(["frobnicate"]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "UsageError"


def test_cli_bench_needs_flag(capsys):
    assert main(["bench"]) == 2


def test_cli_selftest_quick(capsys):
    assert main(["selftest", "--quick"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 14
    assert sum(line.startswith("pass") for line in lines) == 11
