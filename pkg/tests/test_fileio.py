import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minimax_labeling import BOTTOM, TOP, GeneralProblem, ScopeTable, SolverConfig, solve
from minimax_labeling.core import pairwise_to_general
from minimax_labeling.fileio import (
    Names,
    ParseError,
    format_weight,
    parse_dissimilarity,
    parse_operator,
    parse_problem,
    parse_problem_with_names,
    serialize_operator,
    serialize_problem,
    serialize_solution,
    serialize_witness,
)
from minimax_labeling.core import median_operator
from minimax_labeling.reduce import reduce_order

from conftest import random_general, random_pairwise

GOLDEN = Path(__file__).parent / "golden"

MINIMAL = b"""objects 2
labels 2
scope 0 1
0 0 : 1
0 1 : 2
1 0 : 3
1 1 : 4
"""


def test_minimal_document():
    p = parse_problem(MINIMAL)
    assert p.num_objects == 2 and p.num_labels == 2
    assert p.tables[0].values.tolist() == [[1, 2], [3, 4]]


def test_missing_row_reports_incomplete_table():
    text = MINIMAL.replace(b"1 1 : 4\n", b"")
    with pytest.raises(ParseError, match="incomplete table for scope 0") as err:
        parse_problem(text)
    assert err.value.line == 3


def test_infinity_literals():
    p = parse_problem(MINIMAL.replace(b": 1\n", b": -inf\n").replace(b": 4\n", b": +inf\n"))
    assert p.tables[0].values[0, 0] == BOTTOM and p.tables[0].values[1, 1] == TOP


@pytest.mark.parametrize(
    "text, message",
    [
        (MINIMAL + b"0 0 : 1\n", "duplicate entry"),
        (MINIMAL.replace(b"scope 0 1", b"scope 0 2"), "out of range"),
        (MINIMAL.replace(b"1 0 : 3", b"1 2 : 3"), "out of range"),
        (MINIMAL.replace(b": 3", b": three"), "bad weight"),
        (MINIMAL.replace(b": 3", b": nan"), "bad weight"),
        (MINIMAL.replace(b"labels 2\n", b""), "must precede"),
        (b"objects 2\nlabels 2\n0 0 : 1\n", "before any scope"),
        (MINIMAL + b"bogus\n", "unrecognized"),
        (MINIMAL.replace(b"scope 0 1", b"scope 0 0"), "repeated object"),
        (MINIMAL.replace(b": 3", b": 1e400"), "out of range"),
        (MINIMAL.replace(b": 3", b": 0.1").replace(b": 4", b": 0.10000000000000001"), "indistinguishable"),
        (MINIMAL.replace(b"1 0 : 3", b"1 0 0 : 3"), "entry has 3 labels"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_problem(text)


def test_error_carries_line_number():
    with pytest.raises(ParseError) as err:
        parse_problem(MINIMAL + b"bogus\n")
    assert err.value.line == 8 and str(err.value).startswith("line 8:")


def test_scopes_reordered_to_canonical_order():
    text = b"""objects 3
labels 2
scope 2 0
0 0 : 1
0 1 : 2
1 0 : 3
1 1 : 4
scope 1
0 : 0
1 : 5
"""
    p = parse_problem(text)
    assert [t.scope for t in p.tables] == [(1,), (0, 2)]
    # transposed so that rows follow object 0
    assert p.tables[1].values.tolist() == [[1, 3], [2, 4]]
    out = serialize_problem(p)
    assert out.index(b"scope 1\n") < out.index(b"scope 0 2\n")
    assert parse_problem(out) == p


def test_names_round_trip():
    p, names = parse_problem_with_names((GOLDEN / "named.txt").read_bytes())
    assert names.objects and names.labels
    again, names2 = parse_problem_with_names(serialize_problem(p, names))
    assert again == p and names2 == names


def test_named_scope_references():
    text = b"""objects 2
labels 2
object_names a b
label_names lo hi
scope b a
lo lo : 1
lo hi : 2
hi lo : 3
hi hi : 4
"""
    p, names = parse_problem_with_names(text)
    assert p.tables[0].scope == (0, 1) and p.tables[0].values.tolist() == [[1, 3], [2, 4]]
    assert names.label(1) == "hi" and names.object(0) == "a"


@pytest.mark.parametrize("name", ["clustering6.txt", "parity.txt", "all_equal.txt", "star.txt", "named.txt"])
def test_golden_round_trip(name):
    p, names = parse_problem_with_names((GOLDEN / name).read_bytes())
    once = serialize_problem(p, names)
    assert parse_problem(once) == p
    assert serialize_problem(parse_problem(once), names) == once


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_round_trip(seed):
    rng = np.random.default_rng(seed)
    g = random_general(rng, 4, 3, int(rng.integers(1, 4)), 3)
    vals = [t.values.copy() for t in g.tables]
    vals[0].reshape(-1)[0] = BOTTOM
    vals[-1].reshape(-1)[-1] = TOP
    vals[0].reshape(-1)[-1] = float(rng.random())  # a non-integer
    g = GeneralProblem(4, 3, tuple(ScopeTable(t.scope, v) for t, v in zip(g.tables, vals)))
    text = serialize_problem(g)
    assert parse_problem(text) == parse_problem(serialize_problem(parse_problem(text)))
    from minimax_labeling.core import merge_duplicate_scopes

    assert parse_problem(text) == merge_duplicate_scopes(g)


def test_format_weight():
    assert format_weight(3.0) == "3"
    assert format_weight(-2.5) == "-2.5"
    assert format_weight(BOTTOM) == "-inf" and format_weight(TOP) == "+inf"
    assert format_weight(0.1) == "0.1"


def test_solution_table_and_json(rng):
    p = random_pairwise(rng, 3, 2)
    sol = solve(p, SolverConfig(d=2))
    table = serialize_solution(sol).decode()
    assert table.startswith("status accepted\nd 2\nrank")
    assert len(table.strip().splitlines()) == 5
    rec = json.loads(serialize_solution(sol, fmt="json"))
    assert [e["rank"] for e in rec["labellings"]] == [1, 2]
    with pytest.raises(ValueError):
        serialize_solution(sol, fmt="xml")


def test_solution_bytes_deterministic_with_ties():
    g = parse_problem(MINIMAL.replace(b": 2", b": 1").replace(b": 3", b": 1"))
    p = reduce_order(g).pairwise
    outs = {serialize_solution(solve(p, SolverConfig(d=2))) for _ in range(3)}
    assert outs == {b"status accepted\nd 2\nrank  objective  labeling\n1     1          0 0\n2     1          0 1\n"}


def test_solution_uses_names():
    sol = solve(reduce_order(parse_problem(MINIMAL)).pairwise)
    out = serialize_solution(sol, Names(("a", "b"), ("x", "y"))).decode()
    assert out.splitlines()[-1].split()[-2:] == ["x", "x"]


def test_witness_report():
    outcome = reduce_order(parse_problem((GOLDEN / "parity.txt").read_bytes()))
    text = serialize_witness(outcome.witness).decode()
    assert "stage reduce" in text and "labeling 0 0 1" in text and "value +inf" in text


def test_dissimilarity_parsing():
    m = parse_dissimilarity(b"points 3\n0 1 : 4\n2 1 : -inf\n")
    assert m.r[1, 0] == 4 and m.r[0, 2] == BOTTOM
    for bad in (b"0 1 : 4\n", b"points 2\n0 0 : 1\n", b"points 2\n0 1 : 1\n1 0 : 2\n", b""):
        with pytest.raises(ParseError):
            parse_dissimilarity(bad)


def test_operator_round_trip():
    op = median_operator(2, 3)
    assert parse_operator(serialize_operator(op)) == op
    text = serialize_operator(op).decode().splitlines()
    with pytest.raises(ParseError, match="incomplete"):
        parse_operator("\n".join(text[:-1]))
    with pytest.raises(ParseError):
        parse_operator("objects 1\nlabels 2\noperator 0\n0 0 0 : 5\n")


def test_pairwise_export_parses(rng):
    p = random_pairwise(rng, 4, 2)
    g = pairwise_to_general(p)
    assert reduce_order(parse_problem(serialize_problem(g))).pairwise == p
