import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from dpextend.gen import GeneratorSpec, generate
from dpextend.graph import (Color, DatasetGraph, GraphError, GraphFormatError, HittingSetError,
                            bfs_until, boundary, default_hitting_set, distance, distances_from,
                            dump_graph, load_graph, uncovered_boundary_edges,
                            validate_hitting_set)


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    ids = [f"x{i}" for i in range(n)]
    pairs = list(itertools.combinations(ids, 2))
    edges = draw(st.lists(st.sampled_from(pairs), max_size=3 * n)) if pairs else []
    colors = draw(st.lists(st.sampled_from(list(Color)), min_size=n, max_size=n))
    return DatasetGraph(dict(zip(ids, colors)), edges)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def test_load_smallest_boundary():
    g = load_graph("v a blue\nv b red\ne a b\n")
    assert boundary(g).boundary_edges == {("a", "b")}


def test_load_collapses_duplicate_edges():
    g = load_graph("# comment\nv a blue\nv b blue\ne a b\ne b a\ne a b\n")
    assert g.edges == (("a", "b"),)


@pytest.mark.parametrize("text, fragment", [
    ("v a blue\ne a a\n", "self-loop"),
    ("v a blue\nv a red\n", "duplicate vertex"),
    ("v a blue\ne a b\n", "unknown vertex"),
    ("v a\n", "missing color"),
    ("v a green\n", "unknown color"),
    ("x a b\n", "malformed"),
    ("v a blue extra\n", "malformed"),
    ("e a b\nv a blue\nv b red\n", "unknown vertex"),
])
def test_load_rejects(text, fragment):
    with pytest.raises(GraphFormatError, match=fragment) as info:
        load_graph(text)
    assert info.value.lineno is not None


def test_constructor_rejects_self_loop_and_bad_ids():
    with pytest.raises(GraphError):
        DatasetGraph({"a": "blue"}, [("a", "a")])
    with pytest.raises(GraphError):
        DatasetGraph({"a b": "blue"})


def test_figure1_structure(fig1):
    g, exp = fig1.graph, fig1.expected
    assert len(g) == 22
    bs = boundary(g)
    assert set(bs.boundary_edges) == {tuple(sorted(e)) for e in exp["boundary_edges"]}
    assert bs.boundary_vertices == exp["boundary_vertices"]
    assert bs.boundary_of_color[Color.BLUE] == exp["boundary_blue"]
    assert bs.boundary_of_color[Color.RED] == exp["boundary_red"]
    assert (g.neighbors("g") | g.neighbors("h")) - {"g", "h"} == exp["neighborhood_gh"]
    assert distance(g, "a", "d") == 5


def test_figure1_hitting_sets(fig1):
    g, exp = fig1.graph, fig1.expected
    for h in exp["hitting_sets"]:
        assert validate_hitting_set(g, h).members == frozenset(h)
    with pytest.raises(HittingSetError) as info:
        validate_hitting_set(g, exp["not_hitting_set"])
    assert info.value.uncovered == (exp["not_hitting_uncovered"],)


def test_distance_basics(ex23):
    g = ex23.graph
    assert distance(g, "v1", "v4") == 3
    assert distance(g, "v2", "v2") == 0
    with pytest.raises(GraphError):
        distance(g, "v1", "nope")


def test_distance_unreachable():
    g = DatasetGraph({"a": "blue", "b": "red"})
    assert distance(g, "a", "b") is None


def test_distances_from_path(ex23):
    got = distances_from(ex23.graph, {"v1", "v4"})
    assert got["v2"] == (1, "v1")
    assert got["v3"] == (1, "v4")
    assert distances_from(ex23.graph, {"v2"})["v2"] == (0, "v2")
    with pytest.raises(GraphError):
        distances_from(ex23.graph, set())


def test_distances_from_figure1_blue_boundary(fig1):
    g = fig1.graph
    sources = boundary(g).boundary_of_color[Color.BLUE]
    apsp = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    for v in g.vertices:
        d, s = distances_from(g, sources)[v]
        best = min(apsp[v][x] for x in sources)
        assert d == best
        assert s == min(x for x in sources if apsp[v][x] == best)


def test_boundary_of_example3_path(ex23):
    assert set(boundary(ex23.graph).boundary_edges) == {("v1", "v2"), ("v3", "v4")}


def test_monochrome_boundary_is_empty():
    g = generate(GeneratorSpec("path", 5, coloring=["blue"] * 5))
    bs = boundary(g)
    assert not bs.boundary_edges and not bs.boundary_vertices
    assert all(not s for s in bs.boundary_of_color.values())
    assert len(validate_hitting_set(g, set())) == 0


def test_default_hitting_sets(ex23, fig1):
    assert set(default_hitting_set(ex23.graph, "all-boundary")) == {"v1", "v2", "v3", "v4"}
    single = load_graph("v a blue\nv b red\ne a b\n")
    assert set(default_hitting_set(single, "greedy-cover")) == {"a"}
    greedy = default_hitting_set(fig1.graph, "greedy-cover")
    validate_hitting_set(fig1.graph, greedy)
    assert len(greedy) <= 6


def _min_vertex_cover_size(edges):
    verts = sorted(set(itertools.chain.from_iterable(edges)))
    for k in range(len(verts) + 1):
        for combo in itertools.combinations(verts, k):
            if all(u in combo or v in combo for u, v in edges):
                return k
    raise AssertionError


def test_greedy_cover_against_exhaustive_minimum(fig1):
    edges = boundary(fig1.graph).boundary_edges
    assert _min_vertex_cover_size(edges) == 4
    assert len(default_hitting_set(fig1.graph, "greedy-cover")) == 4


def test_bfs_until_stops_at_targets(fig1):
    g = fig1.graph
    assert bfs_until(g, "a", {"g", "c"}) == {"g": 1, "c": 2}
    assert bfs_until(g, "a", {"d"}) == {"d": 5}


def test_dump_roundtrip(fig1):
    g = fig1.graph
    assert load_graph(dump_graph(g)) == g


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_distance_properties(g):
    apsp = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    for u in g.vertices:
        for w in g.vertices:
            d = distance(g, u, w)
            assert d == apsp[u].get(w)
            assert d == distance(g, w, u)
            assert (d == 0) == (u == w)
    for u, v in g.edges:
        for w in g.vertices:
            if distance(g, v, w) is not None:
                assert distance(g, u, w) <= distance(g, v, w) + 1
    for u, v, w in itertools.product(g.vertices[:5], repeat=3):
        duv, dvw, duw = distance(g, u, v), distance(g, v, w), distance(g, u, w)
        if duv is not None and dvw is not None:
            assert duw <= duv + dvw


@given(graphs(), st.data())
@settings(max_examples=150, deadline=None)
def test_distances_from_matches_bruteforce(g, data):
    sources = data.draw(st.sets(st.sampled_from(g.vertices), min_size=1))
    apsp = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    got = distances_from(g, sources)
    for v in g.vertices:
        reach = [apsp[v][s] for s in sources if s in apsp[v]]
        if not reach:
            assert v not in got
        else:
            assert got[v][0] == min(reach)
            assert apsp[v][got[v][1]] == got[v][0]


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_boundary_properties(g):
    bs = boundary(g)
    validate_hitting_set(g, bs.boundary_vertices)
    validate_hitting_set(g, default_hitting_set(g, "greedy-cover"))
    for u, v in g.edges:
        assert ((u, v) in bs.boundary_edges) == (g.color(u) is not g.color(v))
    assert bs.boundary_vertices == set(itertools.chain.from_iterable(bs.boundary_edges))
    for c in Color:
        assert bs.boundary_of_color[c] == {v for v in bs.boundary_vertices if g.color(v) is c}
    assert uncovered_boundary_edges(g, set()) == tuple(sorted(bs.boundary_edges))
