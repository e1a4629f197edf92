"""Edge-list and DIMACS parsing, with line-accurate errors."""

import pytest

from catspire.formats import (
    ParseError,
    parse_dimacs,
    parse_edge_list,
    parse_graph,
    parse_weights,
    serialize_edge_list,
)
from catspire.graphs import Graph
from fractions import Fraction
from helpers import path_graph


def test_parse_edge_list_basic():
    g = parse_edge_list("4 3\n0 1\n1 2\n2 3\n")
    assert g == path_graph(4)


def test_parse_edge_list_comments_blanks_orientation():
    text = "# a path\n\n3 2  # n m\n1 0\n\n2 1 # reversed is fine\n"
    assert parse_edge_list(text) == path_graph(3)


def test_parse_edge_list_header_errors():
    with pytest.raises(ParseError, match="line 1: empty document"):
        parse_edge_list("# nothing\n\n")
    with pytest.raises(ParseError, match="line 1: expected two integers"):
        parse_edge_list("4\n")
    with pytest.raises(ParseError, match="line 2: .*non-negative"):
        parse_edge_list("# c\n-1 0\n")


def test_parse_edge_list_edge_errors():
    with pytest.raises(ParseError, match="line 3: self-loop at vertex 1"):
        parse_edge_list("3 2\n0 1\n1 1\n")
    with pytest.raises(ParseError, match=r"line 2: vertex out of range 0\.\.3: 0 4"):
        parse_edge_list("4 1\n0 4\n")
    with pytest.raises(ParseError, match="line 4: duplicate edge 1 0"):
        parse_edge_list("3 3\n0 1\n1 2\n1 0\n")
    with pytest.raises(ParseError, match="line 4: more than the declared 1 edges"):
        parse_edge_list("3 1\n0 1\n# x\n1 2\n")
    with pytest.raises(ParseError, match="line 1: header declares 3 edges but only 2 given"):
        parse_edge_list("3 3\n0 1\n1 2\n")
    with pytest.raises(ParseError, match="line 2: expected two integers for an edge"):
        parse_edge_list("3 1\n0 one\n")


def test_parse_dimacs():
    text = "c a path\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n"
    assert parse_dimacs(text) == path_graph(4)


def test_parse_dimacs_errors():
    with pytest.raises(ParseError, match="line 3: second problem line"):
        parse_dimacs("c\np edge 2 0\np edge 2 0\n")
    with pytest.raises(ParseError, match="line 1: edge line before the problem line"):
        parse_dimacs("e 1 2\np edge 2 1\n")
    with pytest.raises(ParseError, match="expected 'p edge n m'"):
        parse_dimacs("p col 3 2\n")
    with pytest.raises(ParseError, match="line 2: unrecognized line"):
        parse_dimacs("p edge 2 0\nx 1 2\n")
    with pytest.raises(ParseError, match="line 1: missing problem line"):
        parse_dimacs("c only comments\n")
    with pytest.raises(ParseError, match=r"line 2: vertex out of range 0\.\.1: 0 2"):
        parse_dimacs("p edge 2 1\ne 1 3\n")


def test_parse_graph_sniffs_format():
    native = "2 1\n0 1\n"
    dimacs = "p edge 2 1\ne 1 2\n"
    commented = "c hello\np edge 2 1\ne 1 2\n"
    want = Graph(2, [(0, 1)])
    assert parse_graph(native) == want
    assert parse_graph(dimacs) == want
    assert parse_graph(commented) == want


def test_serialize_round_trip():
    g = Graph(5, [(0, 4), (1, 2), (0, 2)])
    text = serialize_edge_list(g)
    assert text == "5 3\n0 2\n0 4\n1 2\n"
    assert parse_graph(text) == g
    lonely = Graph(3)
    assert parse_graph(serialize_edge_list(lonely)) == lonely


def test_parse_weights():
    got = parse_weights("1/2\n# half\n0\n\n3\n")
    assert got == [Fraction(1, 2), Fraction(0), Fraction(3)]
    with pytest.raises(ParseError, match="line 2: negative weight"):
        parse_weights("1\n-2\n")
    with pytest.raises(ParseError, match="line 1: .*'p/q' or integer"):
        parse_weights("0.5\n")
    err = None
    try:
        parse_weights("1\n2\nbogus\n")
    except ParseError as ex:
        err = ex
    assert err is not None and err.line == 3
