"""Graph generators and small hand-built fixtures."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import Color, DatasetGraph, Edge

KINDS = ("path", "cycle", "complete", "hypercube", "random-connected")


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``coloring`` is ``"alternate"``, ``"threshold"`` (blue iff the 1-based
    vertex index, or the popcount for hypercubes, is ``>= threshold``),
    ``"random"`` (seeded fair coin) or an explicit sequence of colors in
    vertex order.
    """

    kind: str
    n: int
    threshold: int | None = None
    edge_prob: float = 0.5
    seed: int = 0
    coloring: str | Sequence[str] = "alternate"
    max_attempts: int = 10_000


def _linear_ids(n: int) -> list[str]:
    return [f"v{i}" for i in range(1, n + 1)]


def _colors(rule, threshold, ids: list[str], keys: list[int], rng) -> dict[str, Color]:
    if not isinstance(rule, str):
        if len(rule) != len(ids):
            raise ValueError(f"expected {len(ids)} colors, got {len(rule)}")
        return {v: Color(c) for v, c in zip(ids, rule)}
    if rule == "alternate":
        return {v: Color.BLUE if i % 2 == 0 else Color.RED for i, v in enumerate(ids)}
    if rule == "threshold":
        if threshold is None:
            raise ValueError("threshold coloring needs a threshold")
        return {v: Color.BLUE if k >= threshold else Color.RED for v, k in zip(ids, keys)}
    if rule == "random":
        flips = rng.random(len(ids)) < 0.5
        return {v: Color.BLUE if f else Color.RED for v, f in zip(ids, flips)}
    raise ValueError(f"unknown coloring {rule!r}")


def generate(spec: GeneratorSpec) -> DatasetGraph:
    n = spec.n
    if n < 1:
        raise ValueError("size n must be >= 1")
    rng = np.random.default_rng(spec.seed)
    edges: list[Edge]
    if spec.kind == "hypercube":
        t = spec.threshold
        if t is None:
            raise ValueError("hypercube needs a threshold")
        if not 0 <= t <= n:
            raise ValueError(f"threshold must lie in [0, {n}], got {t}")
        if n > 20:
            raise ValueError("hypercube dimension too large")
        ids = [format(i, f"0{n}b") for i in range(2 ** n)]
        keys = [s.count("1") for s in ids]
        edges = [(s, format(i ^ (1 << b), f"0{n}b"))
                 for i, s in enumerate(ids) for b in range(n) if not i & (1 << b)]
        rule = "threshold" if spec.coloring == "alternate" else spec.coloring
        return DatasetGraph(_colors(rule, t, ids, keys, rng), edges)
    ids = _linear_ids(n)
    keys = list(range(1, n + 1))
    if spec.threshold is not None and spec.coloring == "threshold" and not 0 <= spec.threshold <= n + 1:
        raise ValueError(f"threshold must lie in [0, {n + 1}], got {spec.threshold}")
    if spec.kind == "path":
        edges = list(zip(ids, ids[1:]))
    elif spec.kind == "cycle":
        if n < 3:
            raise ValueError("a cycle needs n >= 3")
        edges = list(zip(ids, ids[1:] + ids[:1]))
    elif spec.kind == "complete":
        edges = list(itertools.combinations(ids, 2))
    elif spec.kind == "random-connected":
        if not 0 <= spec.edge_prob <= 1:
            raise ValueError("edge_prob must lie in [0, 1]")
        pairs = list(itertools.combinations(ids, 2))
        for _ in range(spec.max_attempts):
            keep = rng.random(len(pairs)) < spec.edge_prob
            edges = [e for e, k in zip(pairs, keep) if k]
            g = DatasetGraph({v: Color.BLUE for v in ids}, edges)
            if g.is_connected():
                break
        else:
            raise RuntimeError(f"no connected graph after {spec.max_attempts} attempts")
    else:
        raise ValueError(f"unknown generator kind {spec.kind!r}")
    return DatasetGraph(_colors(spec.coloring, spec.threshold, ids, keys, rng), edges)


# -- fixtures ------------------------------------------------------------------------

@dataclass
class Fixture:
    name: str
    graph: DatasetGraph
    partials: dict = field(default_factory=dict)
    mechanisms: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)


_FIG1_BLUE = "a b c g h k l s t u v".split()
_FIG1_RED = "d e f i j m n o p q r".split()
# Only the boundary edges, N({g,h}) and the a..d shortest path are fixed
# facts of this fixture; the remaining monochrome edges are a reconstruction
# chosen to keep those facts true.
_FIG1_EDGES = [
    ("a", "b"), ("a", "g"), ("b", "g"), ("g", "c"), ("c", "h"),
    ("b", "k"), ("k", "l"), ("k", "v"), ("v", "u"), ("v", "t"), ("t", "s"),
    ("i", "d"), ("i", "j"), ("d", "e"), ("e", "f"), ("j", "m"), ("n", "m"),
    ("m", "o"), ("o", "p"), ("p", "q"), ("q", "r"),
    ("l", "q"), ("h", "n"), ("h", "i"), ("r", "s"), ("r", "t"), ("f", "u"),
]


def _figure1() -> Fixture:
    colors = {v: Color.BLUE for v in _FIG1_BLUE} | {v: Color.RED for v in _FIG1_RED}
    g = DatasetGraph(colors, _FIG1_EDGES)
    expected = {
        "boundary_edges": {("l", "q"), ("h", "n"), ("h", "i"), ("r", "s"), ("r", "t"), ("f", "u")},
        "boundary_vertices": set("l q h n i r s t f u".split()),
        "boundary_blue": set("h l s t u".split()),
        "boundary_red": set("f i n q r".split()),
        "hitting_sets": [set("l h u s t".split()), set("a q n i s t u v".split())],
        "not_hitting_set": set("a l n s t j u".split()),
        "not_hitting_uncovered": ("h", "i"),
        "neighborhood_gh": set("a b c i n".split()),
        "dist_a_d": 5,
    }
    return Fixture("figure1", g, expected=expected)


def _example1() -> Fixture:
    from .synth import Mechanism

    g = DatasetGraph({"1": Color.BLUE, "2": Color.RED}, [("1", "2")])
    mechs = {
        "M1": Mechanism(g, {"1": 0.58, "2": 1 - 0.76}),
        "M2": Mechanism(g, {"1": 0.64, "2": 1 - 0.73}),
    }
    return Fixture("example1", g, mechanisms=mechs,
                   expected={"epsilon_e": 2.0, "delta": 0.1})


def _example23() -> Fixture:
    from .synth import Mechanism, PartialMechanism

    g = generate(GeneratorSpec("path", 4, coloring=["red", "blue", "blue", "red"]))
    partials = {
        "counter": PartialMechanism({"v3": 0.5}),
        "example3": PartialMechanism({"v1": 0.3, "v4": 0.1}),
    }
    mechs = {
        "counter-M1": Mechanism(g, {"v1": 1 / 2, "v2": 3 / 4, "v3": 1 / 2, "v4": 1 / 4}),
        "counter-M2": Mechanism(g, {"v1": 1 / 8, "v2": 1 / 4, "v3": 1 / 2, "v4": 1 / 4}),
    }
    expected = {"epsilon_e": 2.0, "delta": 0.0,
                "prob_blue": {"v2": 0.4, "v3": 0.2}, "source": {"v2": "v4", "v3": "v4"}}
    return Fixture("example2-3", g, partials, mechs, expected)


FIXTURES = {"example1": _example1, "example2-3": _example23, "figure1": _figure1}


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None
