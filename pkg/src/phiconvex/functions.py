"""Interval-domain functions, self-maps, and structural hypothesis checks.

A :class:`RealFunction` is an expression plus a closed interval domain and
a declared codomain constraint.  A :class:`PhiMap` wraps a function meant
to map its interval into itself; :func:`check_range` tests that standing
assumption on a grid.  The affinity/convexity/monotonicity checks are
sampling-based: "pass" means "no violation found", never a proof.

All objects are immutable and evaluation is pure, so everything here is
safe to use from several threads at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .expressions import Expr, Variable, evaluate, evaluate_array, parse, render
from .tolerances import EPS_EVAL, EPS_HYP, EPS_POS, EPS_RANGE

__all__ = [
    "Codomain",
    "CodomainError",
    "HypothesisCheck",
    "Interval",
    "PhiMap",
    "RangeCheck",
    "RealFunction",
    "check_affine",
    "check_convex_map",
    "check_increasing",
    "check_range",
]


class CodomainError(Exception):
    """A function value violated its declared or required codomain."""


class Codomain(enum.Enum):
    UNCONSTRAINED = "unconstrained"
    NONNEGATIVE = "nonnegative"
    STRICTLY_POSITIVE = "strictly_positive"


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def grid(self, n: int) -> np.ndarray:
        if n < 2:
            raise ValueError("grids need at least 2 points")
        return np.linspace(self.lo, self.hi, n)


@dataclass(frozen=True)
class RealFunction:
    """An expression with an interval domain and a codomain constraint.

    Scalar calls enforce the declared constraint (within EPS_EVAL /
    EPS_POS slack) and raise :class:`CodomainError` on violation; the
    vectorized :meth:`values` path runs unchecked and yields NaN/inf for
    bad points.
    """

    expr: Expr
    domain: Interval
    codomain: Codomain = Codomain.UNCONSTRAINED

    @classmethod
    def from_text(cls, text: str, lo: float, hi: float,
                  codomain: Codomain = Codomain.UNCONSTRAINED) -> "RealFunction":
        return cls(parse(text), Interval(lo, hi), codomain)

    def __call__(self, x: float) -> float:
        v = evaluate(self.expr, x)
        if self.codomain is Codomain.NONNEGATIVE and v < -EPS_EVAL:
            raise CodomainError(f"f({x!r}) = {v!r} but f is declared nonnegative")
        if self.codomain is Codomain.STRICTLY_POSITIVE and v < EPS_POS:
            raise CodomainError(f"f({x!r}) = {v!r} but f is declared strictly positive")
        return v

    def values(self, xs: np.ndarray) -> np.ndarray:
        return evaluate_array(self.expr, xs)

    def source(self) -> str:
        return render(self.expr)


@dataclass(frozen=True)
class PhiMap:
    """A function intended to map its own interval into itself."""

    fn: RealFunction

    @property
    def interval(self) -> Interval:
        return self.fn.domain

    def __call__(self, x: float) -> float:
        return self.fn(x)

    def values(self, xs: np.ndarray) -> np.ndarray:
        return self.fn.values(xs)

    def source(self) -> str:
        return self.fn.source()

    @classmethod
    def from_text(cls, text: str, lo: float, hi: float) -> "PhiMap":
        return cls(RealFunction.from_text(text, lo, hi))

    @classmethod
    def identity(cls, interval: Interval) -> "PhiMap":
        return cls(RealFunction(Variable(), interval))


@dataclass(frozen=True)
class RangeCheck:
    passed: bool
    worst_x: float
    worst_value: float
    excess: float  # how far the worst value lands outside the interval


@dataclass(frozen=True)
class HypothesisCheck:
    passed: bool
    worst: float  # largest defect/violation observed
    at: tuple  # probe that produced it


def check_range(phi: PhiMap, grid_n: int = 257) -> RangeCheck:
    """Test phi([lo,hi]) ⊆ [lo,hi] on a uniform grid, within EPS_RANGE."""
    iv = phi.interval
    worst_x = worst_v = iv.lo
    worst_excess = -np.inf
    for x in iv.grid(grid_n):
        v = phi(float(x))
        excess = max(iv.lo - v, v - iv.hi)
        if excess > worst_excess:
            worst_excess, worst_x, worst_v = excess, float(x), v
    return RangeCheck(worst_excess <= EPS_RANGE, worst_x, worst_v, worst_excess)


def _probe_triples(iv: Interval, samples: int, seed: int):
    # A fixed lattice first, so canonical defects (endpoints, midpoint
    # mixes) are found exactly and independently of the seed.
    qs = [iv.lo + frac * iv.width for frac in (0.0, 0.25, 0.5, 0.75, 1.0)]
    for x in qs:
        for y in qs:
            for lam in (0.25, 0.5, 0.75):
                yield x, y, lam
    rng = np.random.default_rng(seed)
    xs = rng.uniform(iv.lo, iv.hi, samples)
    ys = rng.uniform(iv.lo, iv.hi, samples)
    ls = rng.uniform(0.0, 1.0, samples)
    for x, y, lam in zip(xs, ys, ls):
        yield float(x), float(y), float(lam)


def check_affine(phi: PhiMap, samples: int = 512, seed: int = 0) -> HypothesisCheck:
    """Test the interpolation identity phi(λx+(1-λ)y) = λ·phi(x)+(1-λ)·phi(y).

    Affine maps satisfy it exactly; this is the property the composition
    results actually use for a "linear" inner map.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    worst, at = -np.inf, (phi.interval.lo, phi.interval.lo, 0.5)
    for x, y, lam in _probe_triples(phi.interval, samples, seed):
        mixed = phi(lam * x + (1.0 - lam) * y)
        interpolated = lam * phi(x) + (1.0 - lam) * phi(y)
        defect = abs(mixed - interpolated)
        if defect > worst:
            worst, at = defect, (x, y, lam)
    return HypothesisCheck(worst <= EPS_HYP, worst, at)


def check_convex_map(phi: PhiMap, samples: int = 512, seed: int = 0) -> HypothesisCheck:
    """One-sided version: phi(λx+(1-λ)y) <= λ·phi(x)+(1-λ)·phi(y) + EPS_HYP."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    worst, at = -np.inf, (phi.interval.lo, phi.interval.lo, 0.5)
    for x, y, lam in _probe_triples(phi.interval, samples, seed):
        violation = phi(lam * x + (1.0 - lam) * y) - (lam * phi(x) + (1.0 - lam) * phi(y))
        if violation > worst:
            worst, at = violation, (x, y, lam)
    return HypothesisCheck(worst <= EPS_HYP, worst, at)


def check_increasing(f: RealFunction, grid_n: int = 257) -> HypothesisCheck:
    """Test f(x_{i+1}) >= f(x_i) - EPS_HYP on a uniform grid."""
    xs = f.domain.grid(grid_n)
    worst, at = -np.inf, (float(xs[0]), float(xs[1]))
    prev = f(float(xs[0]))
    for i in range(1, len(xs)):
        cur = f(float(xs[i]))
        inversion = prev - cur
        if inversion > worst:
            worst, at = inversion, (float(xs[i - 1]), float(xs[i]))
        prev = cur
    return HypothesisCheck(worst <= EPS_HYP, worst, at)
