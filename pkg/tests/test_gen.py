import pytest

from dpextend.gen import FIXTURES, GeneratorSpec, fixture, generate
from dpextend.graph import Color, boundary


def test_path_example():
    g = generate(GeneratorSpec("path", 4, coloring=["red", "blue", "blue", "red"]))
    assert g.vertices == ("v1", "v2", "v3", "v4")
    assert g.edges == (("v1", "v2"), ("v2", "v3"), ("v3", "v4"))
    assert g.color("v1") is Color.RED and g.color("v2") is Color.BLUE


def test_hypercube_threshold():
    g = generate(GeneratorSpec("hypercube", 3, threshold=2))
    assert len(g) == 8 and len(g.edges) == 12
    assert g.color("011") is Color.BLUE and g.color("100") is Color.RED
    pops = {v.count("1") for v in boundary(g).boundary_vertices}
    assert pops == {1, 2}
    # All-blue or all-red hypercubes have no boundary.
    assert not boundary(generate(GeneratorSpec("hypercube", 3, threshold=0))).boundary_edges


def test_complete_and_cycle():
    assert len(generate(GeneratorSpec("complete", 1))) == 1
    assert len(generate(GeneratorSpec("complete", 5)).edges) == 10
    c = generate(GeneratorSpec("cycle", 5))
    assert len(c.edges) == 5 and c.is_connected()


def test_threshold_coloring_on_path():
    g = generate(GeneratorSpec("path", 5, threshold=3, coloring="threshold"))
    assert [g.color(v).value for v in g.vertices] == ["red", "red", "blue", "blue", "blue"]


@pytest.mark.parametrize("spec", [
    GeneratorSpec("path", 0),
    GeneratorSpec("cycle", 2),
    GeneratorSpec("hypercube", 3),
    GeneratorSpec("hypercube", 3, threshold=4),
    GeneratorSpec("moebius", 3),
    GeneratorSpec("path", 3, coloring=["blue"]),
    GeneratorSpec("path", 3, coloring="plaid"),
    GeneratorSpec("path", 3, coloring="threshold"),
    GeneratorSpec("random-connected", 4, edge_prob=1.5),
])
def test_generator_rejects(spec):
    with pytest.raises(ValueError):
        generate(spec)


def test_random_connected_is_reproducible():
    spec = GeneratorSpec("random-connected", 9, edge_prob=0.3, seed=11, coloring="random")
    g = generate(spec)
    assert g.is_connected() and g == generate(spec)
    assert g != generate(GeneratorSpec("random-connected", 9, edge_prob=0.3, seed=12, coloring="random"))


def test_random_connected_gives_up():
    with pytest.raises(RuntimeError):
        generate(GeneratorSpec("random-connected", 6, edge_prob=0.0, max_attempts=5))


def test_fixtures_load():
    for name in FIXTURES:
        assert fixture(name).graph.is_connected()
    with pytest.raises(ValueError):
        fixture("nope")
