"""Seeded random instances shared by the property and acceptance tests."""
import math

import numpy as np

from dpextend.bounds import DpPair, DpParams, compose_u
from dpextend.gen import GeneratorSpec, generate
from dpextend.graph import Color, default_hitting_set
from dpextend.synth import PartialMechanism
from dpextend.verify import sample_feasible_extensions

EPSILONS = (0.1, 0.5, math.log(2), 1.0, 2.0, 3.0)
DELTAS = (0.0, 0.0, 0.01, 0.1)


def random_instance(seed: int, max_n: int = 12):
    """A connected random graph (<= max_n vertices), DP params and a feasible partial mechanism."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_n + 1))
    g = generate(GeneratorSpec("random-connected", n, edge_prob=float(rng.uniform(0.2, 0.6)),
                               seed=seed, coloring="random"))
    if seed % 10 == 9:
        params = DpParams(0.0, 0.05)
    else:
        params = DpParams(float(rng.choice(EPSILONS)), float(rng.choice(DELTAS)))
    pair = DpPair(params)
    strategy = ("all-boundary", "greedy-cover", "greedy-plus")[seed % 3]
    members = set(default_hitting_set(g, "all-boundary" if strategy == "all-boundary"
                                      else "greedy-cover"))
    if strategy == "greedy-plus" or not members:
        extra = rng.choice(g.vertices, size=int(rng.integers(1, max(2, n // 3) + 1)), replace=False)
        members |= {str(v) for v in extra}
    full = sample_feasible_extensions(g, PartialMechanism({}), pair, 1, seed)[0]
    pm = PartialMechanism({v: float(full[i]) for i, v in enumerate(g.vertices) if v in members})
    return g, params, pair, pm


def private_mask(g, samples: np.ndarray, pair, tol: float = 1e-9) -> np.ndarray:
    """Row-wise privacy check by iterated composition (blue and red, both directions)."""
    ok = np.ones(samples.shape[0], dtype=bool)
    for i, u in enumerate(g.vertices):
        for v, d in g.bfs(u).items():
            j = g.vertices.index(v)
            if j <= i:
                continue
            for a, b in ((samples[:, i], samples[:, j]), (1 - samples[:, i], 1 - samples[:, j])):
                ok &= b <= compose_u(pair, d, a) + tol
                ok &= a <= compose_u(pair, d, b) + tol
    return ok


def prob_true(g, samples: np.ndarray) -> np.ndarray:
    blue = np.array([g.color(v) is Color.BLUE for v in g.vertices])
    return np.where(blue, samples, 1.0 - samples)
