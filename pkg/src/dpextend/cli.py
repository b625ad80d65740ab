"""Command-line interface.

Exit codes: 0 success, 1 usage / I/O / parse error, 2 infeasibility or a
failed check.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass

from . import bounds, gen, graph, synth, verify

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    epsilon: float
    delta: float
    tol: float = bounds.TOL
    seed: int | None = None
    samples: int = 100_000

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise UsageError("--epsilon must be >= 0")
        if not 0 <= self.delta < 1:
            raise UsageError("--delta must lie in [0, 1)")
        if not self.tol > 0:
            raise UsageError("--tol must be > 0")

    @property
    def params(self) -> bounds.DpParams:
        return bounds.DpParams(self.epsilon, self.delta)


def _config(args) -> CliConfig:
    if args.e_epsilon is not None:
        if args.epsilon is not None:
            raise UsageError("give either --epsilon or --e-epsilon, not both")
        if args.e_epsilon < 1:
            raise UsageError("--e-epsilon must be >= 1")
        epsilon = math.log(args.e_epsilon)
    elif args.epsilon is not None:
        epsilon = args.epsilon
    else:
        raise UsageError("--epsilon or --e-epsilon is required")
    cfg = CliConfig(epsilon, args.delta, args.tol, getattr(args, "seed", None),
                    getattr(args, "samples", 100_000))
    return cfg


def _params(args) -> bounds.DpParams:
    cfg = _config(args)
    if args.e_epsilon is not None:
        return bounds.DpParams.from_e_epsilon(args.e_epsilon, cfg.delta)
    return cfg.params


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    """Write to ``path`` atomically, or to stdout when ``path`` is None."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".dpextend-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        os.unlink(tmp)
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _graph(path: str) -> graph.DatasetGraph:
    try:
        return graph.load_graph(_read(path))
    except graph.GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _partial(path: str, g) -> synth.PartialMechanism:
    try:
        return synth.load_partial(_read(path), g)
    except graph.GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _mechanism(path: str, g) -> synth.Mechanism:
    try:
        return synth.mechanism_from_csv(_read(path), g)
    except graph.GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _infeasible(g, pm, pair, tol, all_violations: bool) -> int:
    print(synth.NO_MESSAGE)
    found = list(synth.iter_violations(g, pm, pair, tol))
    for v in (found if all_violations else found[:1]):
        print(f"violating pair ({v.u},{v.v}): {v}")
    return EXIT_FAIL


def cmd_extend(args) -> int:
    g = _graph(args.graph)
    pm = _partial(args.partial, g)
    pair = bounds.DpPair(_params(args))
    try:
        m = synth.extend(g, pm, pair, args.tol)
    except graph.HittingSetError as exc:
        print(exc)
        return EXIT_FAIL
    except synth.NoExtensionError:
        return _infeasible(g, pm, pair, args.tol, args.all_violations)
    _write(args.out, synth.mechanism_to_csv(m))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    g = _graph(args.graph)
    pm = _partial(args.partial, g)
    pair = bounds.DpPair(_params(args))
    if args.vertex not in g:
        raise UsageError(f"unknown vertex {args.vertex!r}")
    try:
        ev = synth.evaluate(g, pm, pair, args.vertex, args.tol)
    except graph.HittingSetError as exc:
        print(exc)
        return EXIT_FAIL
    except synth.NoExtensionError:
        return _infeasible(g, pm, pair, args.tol, False)
    print(ev)
    return EXIT_OK


def cmd_check(args) -> int:
    g = _graph(args.graph)
    m = _mechanism(args.mechanism, g)
    params = _params(args)
    pw = verify.pairwise_private(g, m, bounds.DpPair(params), args.tol, args.exhaustive)
    ep = verify.edge_private(g, m, params, args.tol)
    print(f"pairwise: {'ok' if pw is None else 'VIOLATION ' + str(pw)}")
    print(f"edges:    {'ok' if ep is None else 'VIOLATION ' + str(ep)}")
    return EXIT_OK if pw is None and ep is None else EXIT_FAIL


def cmd_audit(args) -> int:
    g = _graph(args.graph)
    m = _mechanism(args.mechanism, g)
    if args.strict and args.seed is None:
        raise UsageError("--strict requires an explicit --seed")
    try:
        report = verify.audit(g, m, _params(args), args.samples, 0 if args.seed is None else args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(report)
    if args.out:
        _write(args.out, report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_pair_check(args) -> int:
    if args.grid < 2:
        raise UsageError("--grid must be >= 2")
    report = bounds.check_suitable(bounds.DpPair(_params(args)), args.grid, args.tol)
    print(report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_boundary(args) -> int:
    g = _graph(args.graph)
    bs = graph.boundary(g)
    lines = [f"boundary edges ({len(bs.boundary_edges)}):"]
    lines += [f"  {u} {v}" for u, v in sorted(bs.boundary_edges)]
    for c in graph.Color:
        lines.append(f"boundary {c}: {' '.join(sorted(bs.boundary_of_color[c]))}")
    print("\n".join(lines))
    if args.out:
        rows = ["u,v"] + [f"{u},{v}" for u, v in sorted(bs.boundary_edges)]
        _write(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_hitting_set(args) -> int:
    g = _graph(args.graph)
    if args.validate is not None:
        members = [x for x in args.validate.split(",") if x]
        for x in members:
            if x not in g:
                raise UsageError(f"unknown vertex {x!r}")
        try:
            graph.validate_hitting_set(g, members)
        except graph.HittingSetError as exc:
            print(exc)
            return EXIT_FAIL
        print("valid boundary-hitting set")
        return EXIT_OK
    h = graph.default_hitting_set(g, args.strategy)
    print(" ".join(h))
    if args.out:
        _write(args.out, "".join(f"{v}\n" for v in h))
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.kind in gen.FIXTURES:
        g = gen.fixture(args.kind).graph
    else:
        if args.strict and args.kind == "random-connected" and args.seed is None:
            raise UsageError("--strict requires an explicit --seed")
        coloring = args.coloring
        if "," in coloring:
            coloring = coloring.split(",")
        spec = gen.GeneratorSpec(args.kind, args.n, args.threshold, args.edge_prob,
                                 0 if args.seed is None else args.seed, coloring)
        try:
            g = gen.generate(spec)
        except (ValueError, RuntimeError) as exc:
            raise UsageError(str(exc)) from None
    _write(args.out, graph.dump_graph(g))
    return EXIT_OK


def _privacy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, help="privacy parameter epsilon (>= 0)")
    p.add_argument("--e-epsilon", type=float, help="give e^epsilon instead, e.g. 2 for log 2")
    p.add_argument("--delta", type=float, default=0.0, help="privacy parameter delta in [0, 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpextend",
                                     description="Optimal binary DP mechanisms from boundary-hitting sets.")
    parser.add_argument("--tol", type=float, default=bounds.TOL, help="comparison tolerance")
    parser.add_argument("--strict", action="store_true", help="require --seed for randomized commands")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extend", help="optimal extension of a partial mechanism (CSV)")
    p.add_argument("graph")
    p.add_argument("partial")
    _privacy_flags(p)
    p.add_argument("--all-violations", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("evaluate", help="optimal extension at a single vertex")
    p.add_argument("graph")
    p.add_argument("partial")
    p.add_argument("vertex")
    _privacy_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("check", help="verify a mechanism CSV is private")
    p.add_argument("graph")
    p.add_argument("mechanism")
    _privacy_flags(p)
    p.add_argument("--exhaustive", action="store_true", help="also check red and lower bounds")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("audit", help="sampling smoke test of a mechanism CSV")
    p.add_argument("graph")
    p.add_argument("mechanism")
    _privacy_flags(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the report as JSON")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("pair-check", help="grid check that the DP bounds form a suitable pair")
    _privacy_flags(p)
    p.add_argument("--grid", type=int, default=10_000)
    p.set_defaults(func=cmd_pair_check)

    p = sub.add_parser("boundary", help="list boundary edges and vertices")
    p.add_argument("graph")
    p.add_argument("--out", help="write boundary edges as CSV")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("hitting-set", help="build or validate a boundary-hitting set")
    p.add_argument("graph")
    p.add_argument("--strategy", choices=["all-boundary", "greedy-cover"], default="all-boundary")
    p.add_argument("--validate", metavar="IDS", help="comma-separated vertex ids to validate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hitting_set)

    p = sub.add_parser("generate", help="emit a graph file")
    p.add_argument("kind", choices=list(gen.KINDS) + list(gen.FIXTURES))
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--threshold", type=int)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--seed", type=int)
    p.add_argument("--coloring", default="alternate",
                   help="alternate, threshold, random, or comma-separated colors")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
