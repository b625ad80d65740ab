"""Independent checks for mechanisms produced by :mod:`dpextend.synth`.

None of these use the closed form ``p(d, alpha)``: pairwise checks iterate
the one-step bound functions, edge checks use the raw DP inequalities, and
the search/audit oracles sample.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import asdict, dataclass
from typing import Iterator

import numpy as np

from .bounds import TOL, BoundPair, DpParams
from .graph import Color, DatasetGraph, GraphError
from .synth import GIVEN, FeasibilityViolation, Mechanism, PartialMechanism


def _powers(pair: BoundPair, alpha, depth: int, fn: str) -> list:
    """``[alpha, f(alpha), f(f(alpha)), ...]`` up to ``depth`` compositions."""
    step = getattr(pair, fn)
    out = [alpha]
    for _ in range(depth):
        out.append(step(out[-1]))
    return out


def _pairs(g: DatasetGraph, only: str | None = None):
    if only is None:
        for u, v in itertools.combinations(g.vertices, 2):
            d = g.bfs(u).get(v)
            if d is not None:
                yield u, v, d
    else:
        for v, d in sorted(g.bfs(only).items()):
            if v != only:
                yield only, v, d


def iter_pairwise_violations(g: DatasetGraph, m: Mechanism, pair: BoundPair, tol: float = TOL,
                             exhaustive: bool = False, only: str | None = None
                             ) -> Iterator[FeasibilityViolation]:
    """Every vertex pair ``(u, v)`` at distance ``d`` must satisfy ``beta <= U^d(alpha)``.

    By default only ``blue`` is checked in both directions. ``exhaustive``
    also checks ``red`` and the lower bounds ``L^d`` directly. ``only``
    restricts the check to pairs containing that vertex. Lower-bound
    failures are reported with ``lhs``/``bound`` negated so that
    ``lhs > bound`` always reads as the violation.
    """
    colors = (Color.BLUE, Color.RED) if exhaustive else (Color.BLUE,)
    depth = max((d for _, _, d in _pairs(g, only)), default=0)
    cache: dict[tuple[str, Color, str], list] = {}

    def powers(x, color, fn):
        key = (x, color, fn)
        if key not in cache:
            cache[key] = _powers(pair, m.prob(x, color), depth, fn)
        return cache[key]

    for u, v, d in _pairs(g, only):
        for color in colors:
            a, b = m.prob(u, color), m.prob(v, color)
            bound = powers(u, color, "upper")[d]
            if b > bound + tol:
                yield FeasibilityViolation(v, u, d, b, bound, color)
            bound = powers(v, color, "upper")[d]
            if a > bound + tol:
                yield FeasibilityViolation(u, v, d, a, bound, color)
            if exhaustive:
                bound = powers(u, color, "lower")[d]
                if b < bound - tol:
                    yield FeasibilityViolation(v, u, d, -b, -bound, color)
                bound = powers(v, color, "lower")[d]
                if a < bound - tol:
                    yield FeasibilityViolation(u, v, d, -a, -bound, color)


def pairwise_private(g: DatasetGraph, m: Mechanism, pair: BoundPair, tol: float = TOL,
                     exhaustive: bool = False) -> FeasibilityViolation | None:
    """``None`` if ``m`` is private for ``pair`` on every vertex pair, else the first violation."""
    return next(iter_pairwise_violations(g, m, pair, tol, exhaustive), None)


@dataclass(frozen=True)
class EdgeViolation:
    u: str
    v: str
    color: Color
    lhs: float
    bound: float

    def __str__(self) -> str:
        return (f"edge ({self.u},{self.v}): Pr[M({self.u})={self.color}] = {self.lhs:.12g} > "
                f"e^eps Pr[M({self.v})={self.color}] + delta = {self.bound:.12g}")


def edge_private(g: DatasetGraph, m: Mechanism, params: DpParams,
                 tol: float = TOL) -> EdgeViolation | None:
    """Check the four (eps, delta) inequalities on every edge."""
    for a, b in g.edges:
        for u, v in ((a, b), (b, a)):
            for color in Color:
                lhs = m.prob(u, color)
                bound = params.lam * m.prob(v, color) + params.delta
                if lhs > bound + tol:
                    return EdgeViolation(u, v, color, lhs, bound)
    return None


@dataclass(frozen=True)
class ComparisonResult:
    verdict: str  # dominates | dominated-by | equal | incomparable
    witnesses: tuple[tuple[str, str], ...] = ()

    def __str__(self) -> str:
        if not self.witnesses:
            return self.verdict
        w = ", ".join(f"{v} favors {side}" for v, side in self.witnesses)
        return f"{self.verdict} ({w})"


def compare(m1: Mechanism, m2: Mechanism, tol: float = TOL) -> ComparisonResult:
    """Pointwise comparison of the probability of the true color.

    ``dominates`` means ``m1`` is at least as good everywhere and strictly
    better (by more than ``tol``) somewhere; differences within ``tol``
    count as ties.
    """
    g = m1.graph
    if set(g.vertices) != set(m2.graph.vertices) or g.true_color != m2.graph.true_color:
        raise GraphError("mechanisms are defined on different graphs")
    first = second = None
    for v in g.vertices:
        diff = m1.prob_true(v) - m2.prob_true(v)
        if diff > tol and first is None:
            first = v
        elif diff < -tol and second is None:
            second = v
    if first is not None and second is not None:
        return ComparisonResult("incomparable", ((first, "first"), (second, "second")))
    if first is not None:
        return ComparisonResult("dominates", ((first, "first"),))
    if second is not None:
        return ComparisonResult("dominated-by", ((second, "second"),))
    return ComparisonResult("equal")


def maximality_probe(g: DatasetGraph, pm: PartialMechanism, pair: BoundPair, m: Mechanism,
                     eta: float = 1e-6, tol: float = TOL) -> str | None:
    """Raise ``Pr[M(w)=T(w)]`` by ``eta`` at each free vertex and expect a violation.

    Returns the first vertex (sorted order) whose bump stays private, i.e. a
    witness that ``m`` is not maximal; ``None`` when every bump fails.
    Vertices already at probability 1 cannot be raised and count as maximal.
    ``m`` itself must be private.
    """
    if pairwise_private(g, m, pair, tol, exhaustive=True) is not None:
        raise ValueError("maximality_probe needs a private mechanism")
    for w in g.vertices:
        if w in pm.domain:
            continue
        current = m.prob_true(w)
        if current >= 1.0 - tol:
            continue
        bumped = m.with_prob_true(w, min(1.0, current + eta))
        if next(iter_pairwise_violations(g, bumped, pair, tol, exhaustive=True, only=w), None) is None:
            return w
    return None


def _stable_hash(token: str) -> int:
    return int.from_bytes(hashlib.sha256(token.encode()).digest()[:8], "little")


def vertex_rng(seed: int, vertex: str) -> np.random.Generator:
    """A per-vertex stream, independent of the order in which vertices are visited."""
    return np.random.default_rng([seed, _stable_hash(vertex)])


def sample_feasible_extensions(g: DatasetGraph, pm: PartialMechanism, pair: BoundPair,
                               trials: int, seed: int, tol: float = TOL,
                               max_resample: int = 1000) -> np.ndarray:
    """Draw ``trials`` random private extensions of ``pm``.

    Free vertices are filled one at a time (in a seeded random order). Each
    proposal is uniform on the interval allowed by the vertices already
    fixed, then accepted only if it passes the ``U``-only check against all of
    them; rejected draws are resampled up to ``max_resample`` times before
    the whole trial restarts. Returns an array of ``prob_blue`` with columns
    in ``g.vertices`` order.
    """
    verts = list(g.vertices)
    col = {v: i for i, v in enumerate(verts)}
    out = np.empty((trials, len(verts)))
    if trials == 0:
        return out
    free = [v for v in verts if v not in pm.domain]
    order_rng = np.random.default_rng([seed, _stable_hash("\0order")])
    rngs = {v: vertex_rng(seed, v) for v in free}
    todo = np.arange(trials)
    for _restart in range(100):
        if todo.size == 0:
            break
        block = np.empty((todo.size, len(verts)))
        for v in pm.domain:
            block[:, col[v]] = pm.assignment[v]
        fixed = [v for v in verts if v in pm.domain]
        alive = np.ones(todo.size, dtype=bool)
        for v in order_rng.permutation(free):
            v = str(v)
            lo = np.zeros(todo.size)
            hi = np.ones(todo.size)
            dist_v = g.bfs(v)
            links = [(x, dist_v[x]) for x in fixed if x in dist_v]
            for x, d in links:
                a = block[:, col[x]]
                lo = np.maximum(lo, pair.lower_power(d, a) if d else a)
                hi = np.minimum(hi, pair.upper_power(d, a) if d else a)
            pending = alive.copy()
            rng = rngs[v]
            for _ in range(max_resample):
                idx = np.flatnonzero(pending)
                if idx.size == 0:
                    break
                lo_i, hi_i = lo[idx], np.maximum(hi[idx], lo[idx])
                prop = lo_i + (hi_i - lo_i) * rng.random(idx.size)
                ok = np.ones(idx.size, dtype=bool)
                for x, d in links:
                    a = block[idx, col[x]]
                    ok &= prop <= np.asarray(pair.upper_power(d, a)) + tol
                    ok &= a <= np.asarray(pair.upper_power(d, prop)) + tol
                block[idx[ok], col[v]] = prop[ok]
                pending[idx[ok]] = False
            alive &= ~pending
            fixed.append(v)
        out[todo[alive]] = block[alive]
        todo = todo[~alive]
    if todo.size:
        raise RuntimeError("could not draw feasible extensions; is pm extensible?")
    return out


def random_feasible_search(g: DatasetGraph, pm: PartialMechanism, pair: BoundPair,
                           trials: int, seed: int, tol: float = TOL) -> Mechanism | None:
    """Best (largest total ``Pr[M(v)=T(v)]``) of ``trials`` random private extensions."""
    samples = sample_feasible_extensions(g, pm, pair, trials, seed, tol)
    if trials == 0:
        return None
    blue = np.array([g.color(v) is Color.BLUE for v in g.vertices])
    true_p = np.where(blue, samples, 1.0 - samples)
    best = samples[int(np.argmax(true_p.sum(axis=1)))]
    prov = {v: GIVEN for v in pm.domain}
    return Mechanism(g, {v: float(best[i]) for i, v in enumerate(g.vertices)}, prov)


@dataclass(frozen=True)
class AuditReport:
    samples_per_vertex: int
    seed: int
    worst_edge: tuple[str, str] | None
    worst_color: str | None
    worst_margin: float
    passed: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        edge = "-" if self.worst_edge is None else f"({self.worst_edge[0]},{self.worst_edge[1]})"
        return (f"audit {verdict}: samples={self.samples_per_vertex} seed={self.seed} "
                f"worst edge {edge} color {self.worst_color or '-'} margin {self.worst_margin:.6g}")


def audit(g: DatasetGraph, m: Mechanism, params: DpParams, samples: int = 100_000,
          seed: int = 0) -> AuditReport:
    """Empirical smoke test of the edge inequalities from Bernoulli samples.

    Each vertex draws ``samples`` outputs from its own seeded stream. An
    inequality ``p_u <= e^eps p_v + delta`` passes if it holds for the
    empirical frequencies up to a slack of three standard errors (no
    multiple-testing correction). This is not a certificate.
    """
    if samples < 100:
        raise ValueError("audit needs at least 100 samples per vertex")
    freq = {}
    for v in g.vertices:
        draws = vertex_rng(seed, v).random(samples) < m.prob_blue[v]
        freq[v] = int(np.count_nonzero(draws)) / samples
    worst_margin, worst_edge, worst_color = float("inf"), None, None
    for a, b in g.edges:
        for u, v in ((a, b), (b, a)):
            for color in Color:
                pu = freq[u] if color is Color.BLUE else 1.0 - freq[u]
                pv = freq[v] if color is Color.BLUE else 1.0 - freq[v]
                slack = 3 * (np.sqrt(pu * (1 - pu) / samples)
                             + params.lam * np.sqrt(pv * (1 - pv) / samples))
                margin = float(params.lam * pv + params.delta + slack - pu)
                if margin < worst_margin:
                    worst_margin, worst_edge, worst_color = margin, (u, v), color.value
    return AuditReport(samples, seed, worst_edge, worst_color, worst_margin, worst_margin >= 0)
