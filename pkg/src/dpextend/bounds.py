"""Upper/lower bound pairs for binary mechanisms and the (eps, delta) instance.

A bound pair ``(L, U)`` says how far the probability of one output may move
between neighboring datasets: if a dataset outputs ``j`` with probability
``alpha``, every neighbor outputs ``j`` with probability in
``[L(alpha), U(alpha)]``. Composing ``d`` times gives the constraint between
datasets at graph distance ``d``.

The DP pair has the closed form :func:`p` for ``U^d``; iterated composition
(:func:`compose_u`) is kept as an independent route to the same numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

TOL = 1e-9

ArrayLike = Union[float, np.ndarray]


def as_probability(x: float, tol: float = TOL) -> float:
    """Validate ``x`` as a probability, snapping values within ``tol`` of [0, 1]."""
    x = float(x)
    if math.isnan(x) or x < -tol or x > 1 + tol:
        raise ValueError(f"{x!r} is not a probability")
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class DpParams:
    epsilon: float
    delta: float = 0.0
    lam: float = field(init=False, repr=False)
    lam_m1: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon!r}")
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta!r}")
        # e^eps is computed once so every code path sees the same float.
        object.__setattr__(self, "lam", math.exp(self.epsilon))
        object.__setattr__(self, "lam_m1", math.expm1(self.epsilon))

    @classmethod
    def from_e_epsilon(cls, e_epsilon: float, delta: float = 0.0) -> "DpParams":
        """Build from ``e^eps`` directly, so e.g. ``2`` gives exactly ``lam == 2``."""
        if e_epsilon < 1:
            raise ValueError("e^epsilon must be >= 1")
        params = cls(math.log(e_epsilon), delta)
        object.__setattr__(params, "lam", float(e_epsilon))
        object.__setattr__(params, "lam_m1", float(e_epsilon) - 1.0)
        return params


def u_dp(alpha: ArrayLike, params: DpParams) -> ArrayLike:
    lam, delta = params.lam, params.delta
    out = np.minimum(np.minimum(lam * alpha + delta, (lam + delta - 1 + alpha) / lam), 1.0)
    return float(out) if np.ndim(out) == 0 else out


def l_dp(alpha: ArrayLike, params: DpParams) -> ArrayLike:
    lam, delta = params.lam, params.delta
    out = np.maximum(np.maximum(lam * alpha - delta - lam + 1, (alpha - delta) / lam), 0.0)
    return float(out) if np.ndim(out) == 0 else out


def tau(alpha: float, params: DpParams) -> float:
    """Number of steps the linear regime of ``U`` stays active starting from ``alpha``.

    Returns ``math.inf`` when ``alpha == delta == 0`` (the iteration never
    leaves 0). Negative raw ceilings are clamped to 0.
    """
    if params.epsilon == 0:
        raise ValueError("tau is undefined for epsilon == 0")
    lam, delta = params.lam, params.delta
    denom = (lam + 1) * (params.lam_m1 * alpha + delta)
    if denom <= 0:
        return math.inf
    raw = math.ceil((math.log(params.lam_m1 + 2 * delta) - math.log(denom)) / params.epsilon)
    return max(0, raw)


@dataclass(frozen=True)
class ClosedFormBound:
    d: int
    alpha: float
    tau: float
    regime: str  # linear | damped | saturated | epsilon-zero
    value: float


def p(d: int, alpha: float, params: DpParams) -> ClosedFormBound:
    """Tightest bound a vertex with probability ``alpha`` puts on one ``d`` hops away."""
    if d < 1:
        raise ValueError("p is defined for d >= 1")
    alpha = as_probability(alpha)
    delta = params.delta
    if params.epsilon == 0:
        return ClosedFormBound(d, alpha, math.inf, "epsilon-zero", min(alpha + d * delta, 1.0))
    t = tau(alpha, params)
    lam_m1, eps = params.lam_m1, params.epsilon
    if d <= t:
        grow = math.exp(d * eps)
        value = grow * alpha + delta * math.expm1(d * eps) / lam_m1
        return ClosedFormBound(d, alpha, t, "linear", min(value, 1.0))
    t = int(t)
    back = math.exp((d - t) * eps)
    # expm1 keeps the small-epsilon differences accurate.
    value = (math.exp((2 * t - d) * eps) * alpha - math.expm1(-(d - t) * eps)
             + delta * (math.expm1(t * eps) + math.expm1((d - t) * eps)) / (back * lam_m1))
    if value >= 1.0:
        return ClosedFormBound(d, alpha, t, "saturated", 1.0)
    return ClosedFormBound(d, alpha, t, "damped", value)


class BoundPair:
    """Increasing functions ``lower``/``upper`` on [0, 1].

    Subclasses must accept scalars and numpy arrays. ``upper_power`` and
    ``lower_power`` default to iterated composition.
    """

    def lower(self, alpha: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def upper(self, alpha: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def upper_power(self, d: int, alpha: ArrayLike) -> ArrayLike:
        return compose_u(self, d, alpha)

    def lower_power(self, d: int, alpha: ArrayLike) -> ArrayLike:
        return compose_l(self, d, alpha)


class DpPair(BoundPair):
    """The (eps, delta)-DP pair; ``upper_power`` uses the closed form for scalars."""

    def __init__(self, params: DpParams):
        self.params = params

    def __repr__(self) -> str:
        return f"DpPair({self.params!r})"

    def lower(self, alpha):
        return l_dp(alpha, self.params)

    def upper(self, alpha):
        return u_dp(alpha, self.params)

    def upper_power(self, d, alpha):
        if d == 0:
            return alpha
        if np.ndim(alpha) == 0:
            return p(d, alpha, self.params).value
        return compose_u(self, d, alpha)

    def lower_power(self, d, alpha):
        if d == 0:
            return alpha
        if np.ndim(alpha) == 0:
            return 1.0 - p(d, 1.0 - alpha, self.params).value
        return compose_l(self, d, alpha)


class FunctionPair(BoundPair):
    """A bound pair built from two plain callables, e.g. for testing."""

    def __init__(self, lower: Callable[[ArrayLike], ArrayLike], upper: Callable[[ArrayLike], ArrayLike]):
        self._lower = lower
        self._upper = upper

    def lower(self, alpha):
        return self._lower(alpha)

    def upper(self, alpha):
        return self._upper(alpha)


def compose_u(pair: BoundPair, d: int, alpha: ArrayLike) -> ArrayLike:
    if d < 0:
        raise ValueError("composition depth must be >= 0")
    for _ in range(d):
        alpha = pair.upper(alpha)
    return alpha


def compose_l(pair: BoundPair, d: int, alpha: ArrayLike) -> ArrayLike:
    if d < 0:
        raise ValueError("composition depth must be >= 0")
    for _ in range(d):
        alpha = pair.lower(alpha)
    return alpha


@dataclass(frozen=True)
class SuitabilityReport:
    ok: bool
    failed: str | None = None
    alpha: float | None = None
    detail: str = ""

    def __str__(self) -> str:
        if self.ok:
            return "suitable pair: all checks pass"
        return f"not a suitable pair: {self.failed} fails at alpha={self.alpha!r} ({self.detail})"


def check_suitable(pair: BoundPair, grid_size: int = 10_001, tol: float = TOL,
                   require_complement: bool = True) -> SuitabilityReport:
    """Grid check of the suitable-pair axioms.

    Checks, in order: ``L(a) <= a <= U(a)``; ``L(U(a)) <= a <= U(L(a))``;
    ``U(a) <= 1 - L(1 - a)``; monotonicity of both functions; and, when
    ``require_complement`` is set, the equality ``U(a) == 1 - L(1 - a)``.
    Reports the first failing check and the smallest failing alpha.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    a = np.linspace(0.0, 1.0, grid_size)
    lo = np.asarray(pair.lower(a), dtype=float)
    up = np.asarray(pair.upper(a), dtype=float)
    mirrored = 1.0 - np.asarray(pair.lower(1.0 - a), dtype=float)
    checks = [
        ("range", (lo < -tol) | (up > 1 + tol), "values leave [0, 1]"),
        ("axiom 1", (lo > a + tol) | (a > up + tol), "L(a) <= a <= U(a)"),
        ("axiom 2", (np.asarray(pair.lower(up)) > a + tol) | (a > np.asarray(pair.upper(lo)) + tol),
         "L(U(a)) <= a <= U(L(a))"),
        ("axiom 3", up > mirrored + tol, "U(a) <= 1 - L(1-a)"),
        ("monotonicity", np.concatenate([[False], (np.diff(lo) < -tol) | (np.diff(up) < -tol)]),
         "L and U nondecreasing"),
    ]
    if require_complement:
        checks.append(("complement", np.abs(up - mirrored) > tol, "U(a) == 1 - L(1-a)"))
    for name, bad, what in checks:
        if np.any(bad):
            i = int(np.argmax(bad))
            return SuitabilityReport(False, name, float(a[i]), what)
    return SuitabilityReport(True)
