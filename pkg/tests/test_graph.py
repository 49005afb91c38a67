import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cove.errors import ParseError
from cove.graph import (
    connected_components,
    parse_edge_list,
    row_normalized_adjacency,
    write_edge_list,
)

from conftest import k3, make_graph, path


def test_parse_two_edges():
    g = parse_edge_list("0 1\n1 2\n")
    assert g.n == 3
    assert g.total_edges == 2
    assert list(g.neighbors(1)) == [0, 2]


def test_parse_duplicate_edges_sum_weights():
    g = parse_edge_list("0 1\n0 1\n")
    assert g.total_edges == 1
    assert g.neighbor_weights(0)[0] == 2.0


def test_parse_drops_self_loops_with_warning():
    with pytest.warns(UserWarning, match="1 self-loop"):
        g = parse_edge_list("0 0\n0 1\n")
    assert g.total_edges == 1
    assert g.n == 2


def test_parse_comments_blanks_and_string_labels():
    g = parse_edge_list("# header\n\nalpha beta 2.5\nbeta gamma\n")
    assert g.n == 3
    assert g.labels == ("alpha", "beta", "gamma")
    assert g.neighbor_weights(0)[0] == 2.5


@pytest.mark.parametrize(
    "text,msg",
    [
        ("0\n", "2 or 3"),
        ("0 1 2 3\n", "2 or 3"),
        ("0 1 x\n", "non-numeric"),
        ("0 1 0\n", "weight"),
        ("0 1 -2\n", "weight"),
    ],
)
def test_parse_errors_carry_line_numbers(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_edge_list("0 9\n" + text)
    try:
        parse_edge_list("0 9\n" + text)
    except ParseError as exc:
        assert exc.line_no == 2


def test_row_normalized_triangle_uniform(triangle):
    t = row_normalized_adjacency(triangle).toarray()
    expected = np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    np.testing.assert_allclose(t, expected, atol=1e-15)


def test_row_normalized_path():
    t = row_normalized_adjacency(path(3)).toarray()
    np.testing.assert_allclose(t[1], [0.5, 0, 0.5], atol=1e-15)
    np.testing.assert_allclose(t[0], [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(t[2], [0, 1, 0], atol=1e-15)


def test_row_normalized_weighted_star():
    # center 0 with leaves 1,2,3; leaf 1 carries weight 3
    g = make_graph({(0, 1): 3.0, (0, 2): 1.0, (0, 3): 1.0})
    t = row_normalized_adjacency(g).toarray()
    np.testing.assert_allclose(t[0], [0, 0.6, 0.2, 0.2], atol=1e-15)


def test_row_normalized_isolated_row_is_zero():
    g = make_graph({(0, 1): 1.0}, n=3)
    t = row_normalized_adjacency(g).toarray()
    assert t[2].sum() == 0.0


def test_connected_components_cases():
    assert list(connected_components(k3())) == [0, 0, 0]
    two = make_graph({(0, 1): 1.0, (2, 3): 1.0})
    assert list(connected_components(two)) == [0, 0, 1, 1]
    empty = make_graph({}, n=4)
    assert list(connected_components(empty)) == [0, 1, 2, 3]


def _random_graph_strategy():
    return st.builds(
        lambda n, pairs, ws: (n, pairs, ws),
        st.integers(2, 12),
        st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=30),
        st.lists(st.floats(0.25, 8.0), min_size=30, max_size=30),
    )


@settings(max_examples=60, deadline=None)
@given(_random_graph_strategy())
def test_parse_write_round_trip(data):
    n, pairs, ws = data
    lines = []
    for (u, v), w in zip(pairs, ws):
        if u != v and u < n and v < n:
            lines.append(f"{u} {v} {w!r}")
    text = "\n".join(lines) + "\n" if lines else ""
    g = parse_edge_list(text)
    buf = io.StringIO()
    write_edge_list(g, buf)
    g2 = parse_edge_list(buf.getvalue())
    assert g2.n == g.n
    assert g2.labels == g.labels
    assert g2.total_edges == g.total_edges
    np.testing.assert_array_equal(g2.indptr, g.indptr)
    np.testing.assert_array_equal(g2.indices, g.indices)
    np.testing.assert_array_equal(g2.weights, g.weights)


@settings(max_examples=60, deadline=None)
@given(_random_graph_strategy())
def test_degree_sum_counts_each_edge_twice(data):
    n, pairs, ws = data
    edges = {}
    for (u, v), w in zip(pairs, ws):
        if u != v and u < n and v < n:
            key = (min(u, v), max(u, v))
            edges[key] = edges.get(key, 0.0) + w
    g = make_graph(edges, n=n)
    assert g.weighted_degrees.sum() == pytest.approx(2 * sum(edges.values()))


@settings(max_examples=40, deadline=None)
@given(_random_graph_strategy())
def test_transition_rows_sum_to_one_or_zero(data):
    n, pairs, ws = data
    edges = {}
    for (u, v), w in zip(pairs, ws):
        if u != v and u < n and v < n:
            edges[(min(u, v), max(u, v))] = 1.0
    g = make_graph(edges, n=n)
    sums = np.asarray(row_normalized_adjacency(g).sum(axis=1)).ravel()
    isolated = g.degrees == 0
    assert np.all(np.abs(sums[~isolated] - 1.0) < 1e-12)
    assert np.all(sums[isolated] == 0.0)
