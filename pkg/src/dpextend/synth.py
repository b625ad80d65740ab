"""Optimal extension of a partial binary mechanism from a boundary-hitting set.

Given probabilities of outputting ``blue`` on a boundary-hitting set, every
other vertex receives the largest probability of its true color that the
hitting-set values allow. That assignment dominates every other private
extension.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .bounds import TOL, BoundPair, DpPair, DpParams, as_probability, p
from .graph import (Color, DatasetGraph, GraphError, GraphFormatError, HittingSet,
                    bfs_until, boundary, distances_from, validate_hitting_set)

GIVEN = "given"
NO_MESSAGE = "No (L,U)-private extension exists."


@dataclass(frozen=True)
class PartialMechanism:
    """Probability of ``blue`` on a subset of vertices (normally a hitting set)."""

    assignment: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "assignment",
                           {v: as_probability(x) for v, x in self.assignment.items()})

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.assignment)

    def prob(self, v: str, color: Color) -> float:
        a = self.assignment[v]
        return a if color is Color.BLUE else 1.0 - a


@dataclass
class Mechanism:
    """A full mechanism: probability of ``blue`` at every vertex of ``graph``.

    ``provenance[v]`` is ``"given"`` for hitting-set vertices, otherwise the
    hitting-set vertex whose bound is binding, or ``None`` when nothing
    constrains ``v``.
    """

    graph: DatasetGraph
    prob_blue: dict[str, float]
    provenance: dict[str, str | None] = field(default_factory=dict)

    def __post_init__(self):
        if set(self.prob_blue) != set(self.graph.vertices):
            raise GraphError("mechanism must assign every vertex of the graph exactly once")

    def prob(self, v: str, color: Color) -> float:
        a = self.prob_blue[v]
        return a if color is Color.BLUE else 1.0 - a

    def prob_true(self, v: str) -> float:
        return self.prob(v, self.graph.color(v))

    def at(self, v: str) -> float:
        return self.prob_true(v)

    def with_prob_true(self, v: str, value: float) -> "Mechanism":
        """Copy with ``Pr[M(v) = T(v)]`` replaced by ``value``."""
        blue = value if self.graph.color(v) is Color.BLUE else 1.0 - value
        return Mechanism(self.graph, {**self.prob_blue, v: blue}, dict(self.provenance))


@dataclass(frozen=True)
class FeasibilityViolation:
    """``lhs`` at ``u`` exceeds ``bound``, the bound induced by ``v`` at distance ``d``."""

    u: str
    v: str
    d: int
    lhs: float
    bound: float
    color: Color = Color.BLUE

    def __str__(self) -> str:
        return (f"Pr[M({self.u})={self.color}] = {self.lhs:.12g} exceeds bound {self.bound:.12g} "
                f"induced by {self.v} at distance {self.d}")


class NoExtensionError(Exception):
    def __init__(self, violation: FeasibilityViolation):
        self.violation = violation
        super().__init__(f"{NO_MESSAGE} {violation}")


def _hitting_set(g: DatasetGraph, pm: PartialMechanism) -> HittingSet:
    for v in pm.domain:
        if v not in g:
            raise GraphError(f"hitting-set member {v!r} is not a vertex of the graph")
    return validate_hitting_set(g, pm.domain)


def iter_violations(g: DatasetGraph, pm: PartialMechanism, pair: BoundPair,
                    tol: float = TOL) -> Iterator[FeasibilityViolation]:
    """All pairwise conflicts among the given values, in sorted pair order.

    Only ``blue`` is checked, in both directions; that suffices for both
    colors and for the lower bounds.
    """
    for v in pm.domain:
        if v not in g:
            raise GraphError(f"hitting-set member {v!r} is not a vertex of the graph")
    for u, v in itertools.combinations(sorted(pm.domain), 2):
        d = g.bfs(u).get(v)
        if d is None:
            continue
        a, b = pm.assignment[u], pm.assignment[v]
        bound = pair.upper_power(d, b)
        if a > bound + tol:
            yield FeasibilityViolation(u, v, d, a, bound)
        bound = pair.upper_power(d, a)
        if b > bound + tol:
            yield FeasibilityViolation(v, u, d, b, bound)


def check_extensible(g: DatasetGraph, pm: PartialMechanism, pair: BoundPair,
                     tol: float = TOL) -> FeasibilityViolation | None:
    """``None`` if some private extension of ``pm`` exists, else the first conflict."""
    return next(iter_violations(g, pm, pair, tol), None)


def _min_bound(g, pm, pair, w, dists, tol):
    # Smallest bound wins; among bounds within tol of it, the smallest id is reported.
    color = g.color(w)
    terms = [(pair.upper_power(dists[u], pm.prob(u, color)), u) for u in sorted(dists)]
    if not terms:
        return 1.0, None
    best = min(t for t, _ in terms)
    return best, next(u for t, u in terms if t <= best + tol)


def extend(g: DatasetGraph, pm: PartialMechanism, pair: BoundPair, tol: float = TOL) -> Mechanism:
    """The optimal private extension of ``pm``.

    Raises :class:`~dpextend.graph.HittingSetError` if ``pm`` is not defined
    on a boundary-hitting set and :class:`NoExtensionError` if no private
    extension exists. Vertices in a component without any hitting-set member
    get their true color with probability 1.
    """
    h = _hitting_set(g, pm)
    bad = check_extensible(g, pm, pair, tol)
    if bad is not None:
        raise NoExtensionError(bad)
    prob_blue: dict[str, float] = {}
    prov: dict[str, str | None] = {}
    for v in g.vertices:
        if v in h:
            prob_blue[v] = pm.assignment[v]
            prov[v] = GIVEN
            continue
        dists = {u: g.bfs(u)[v] for u in h if v in g.bfs(u)}
        value, src = _min_bound(g, pm, pair, v, dists, tol)
        prob_blue[v] = value if g.color(v) is Color.BLUE else 1.0 - value
        prov[v] = src
    return Mechanism(g, prob_blue, prov)


@dataclass(frozen=True)
class Evaluation:
    vertex: str
    color: Color
    prob_true: float
    source: str | None  # "given", binding hitting-set vertex, or None

    def __str__(self) -> str:
        how = {GIVEN: "given", None: "unconstrained"}.get(self.source, f"bound by {self.source}")
        return f"{self.vertex} {self.color} {self.prob_true:.12g} ({how})"


def evaluate(g: DatasetGraph, pm: PartialMechanism, pair: BoundPair, u: str,
             tol: float = TOL) -> Evaluation:
    """Value of the optimal extension at a single vertex ``u``.

    Only the ball around ``u`` that reaches every hitting-set member is
    searched. A hitting-set vertex returns its given value flagged ``given``.
    """
    if u not in g:
        raise GraphError(f"unknown vertex {u!r}")
    h = _hitting_set(g, pm)
    bad = check_extensible(g, pm, pair, tol)
    if bad is not None:
        raise NoExtensionError(bad)
    color = g.color(u)
    if u in h:
        return Evaluation(u, color, pm.prob(u, color), GIVEN)
    dists = bfs_until(g, u, h.members)
    value, src = _min_bound(g, pm, pair, u, dists, tol)
    return Evaluation(u, color, value, src)


def homogeneous_partial(g: DatasetGraph, alpha_blue: float, alpha_red: float) -> PartialMechanism:
    """Boundary assignment with ``Pr[M(v)=T(v)] = alpha_{T(v)}`` on every boundary vertex."""
    alpha = {Color.BLUE: as_probability(alpha_blue), Color.RED: as_probability(alpha_red)}
    return PartialMechanism({
        v: alpha[Color.BLUE] if g.color(v) is Color.BLUE else 1.0 - alpha[Color.RED]
        for v in boundary(g).boundary_vertices
    })


def extend_homogeneous(g: DatasetGraph, alpha_blue: float, alpha_red: float,
                       params: DpParams, tol: float = TOL) -> Mechanism:
    """Optimal extension of a boundary-homogeneous assignment.

    Each non-boundary vertex only looks at its nearest boundary vertex of
    the same true color.
    """
    pm = homogeneous_partial(g, alpha_blue, alpha_red)
    bad = check_extensible(g, pm, DpPair(params), tol)
    if bad is not None:
        raise NoExtensionError(bad)
    alpha = {Color.BLUE: as_probability(alpha_blue), Color.RED: as_probability(alpha_red)}
    bs = boundary(g)
    nearest = {c: distances_from(g, bs.boundary_of_color[c]) if bs.boundary_of_color[c] else {}
               for c in Color}
    prob_blue: dict[str, float] = {}
    prov: dict[str, str | None] = {}
    for v in g.vertices:
        if v in bs.boundary_vertices:
            prob_blue[v], prov[v] = pm.assignment[v], GIVEN
            continue
        c = g.color(v)
        hit = nearest[c].get(v)
        if hit is None:
            value, prov[v] = 1.0, None
        else:
            value, prov[v] = p(hit[0], alpha[c], params).value, hit[1]
        prob_blue[v] = value if c is Color.BLUE else 1.0 - value
    return Mechanism(g, prob_blue, prov)


def balanced_value(d: int, params: DpParams) -> float:
    """``Pr[M(u)=T(u)]`` of the optimal balanced mechanism at distance ``d`` from the boundary.

    ``d == 0`` gives the common boundary value itself.
    """
    if params.epsilon == 0:
        raise ValueError("balanced_value is not defined for epsilon == 0")
    if d < 0:
        raise ValueError("d must be >= 0")
    lam, lam_m1, delta = params.lam, params.lam_m1, params.delta
    grow = math.exp(d * params.epsilon)
    value = 1 - (lam_m1 - delta * (grow * lam + grow - 2)) / (grow * (lam + 1) * lam_m1)
    return min(1.0, max(0.0, value))


# -- file formats ----------------------------------------------------------------

def load_partial(text: str, g: DatasetGraph | None = None) -> PartialMechanism:
    """Parse ``<vertex-id> <prob_blue>`` lines; ``#`` starts a comment line."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected '<vertex> <prob_blue>', got {line!r}", lineno)
        vid, val = parts
        if vid in values:
            raise GraphFormatError(f"duplicate vertex {vid!r}", lineno)
        if g is not None and vid not in g:
            raise GraphFormatError(f"unknown vertex {vid!r}", lineno)
        try:
            values[vid] = as_probability(float(val))
        except ValueError:
            raise GraphFormatError(f"invalid probability {val!r}", lineno) from None
    return PartialMechanism(values)


def dump_partial(pm: PartialMechanism) -> str:
    return "".join(f"{v} {pm.assignment[v]!r}\n" for v in sorted(pm.assignment))


CSV_HEADER = ("vertex", "true_color", "prob_blue", "prob_true", "source")


def mechanism_to_csv(m: Mechanism) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for v in m.graph.vertices:
        src = m.provenance.get(v)
        w.writerow([v, m.graph.color(v), f"{m.prob_blue[v]:.12g}", f"{m.prob_true(v):.12g}",
                    "-" if src is None else src])
    return buf.getvalue()


def mechanism_from_csv(text: str, g: DatasetGraph) -> Mechanism:
    """Read a mechanism CSV; only ``vertex``, ``prob_blue`` and optionally ``true_color``/``source`` are used."""
    rows = list(csv.DictReader(io.StringIO(text)))
    prob_blue: dict[str, float] = {}
    prov: dict[str, str | None] = {}
    for lineno, row in enumerate(rows, 2):
        try:
            v = row["vertex"]
            val = as_probability(float(row["prob_blue"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphFormatError(f"bad mechanism row: {exc}", lineno) from None
        if v not in g:
            raise GraphFormatError(f"unknown vertex {v!r}", lineno)
        if v in prob_blue:
            raise GraphFormatError(f"duplicate vertex {v!r}", lineno)
        col = row.get("true_color")
        if col and col != g.color(v).value:
            raise GraphFormatError(f"true_color {col!r} of {v!r} disagrees with the graph", lineno)
        prob_blue[v] = val
        src = row.get("source")
        prov[v] = None if src in (None, "", "-") else src
    missing = set(g.vertices) - set(prob_blue)
    if missing:
        raise GraphFormatError(f"mechanism misses vertices: {', '.join(sorted(missing))}")
    return Mechanism(g, prob_blue, prov)
