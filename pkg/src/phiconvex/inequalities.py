"""Checks for the named inequality results.

Three families:

* composition checks (thm-2.1 / 2.4 / 2.7 / 2.12 / 2.15): with verified
  hypotheses, f composed with the self-map lands in the matching plain
  class (checked by a counterexample search with the identity map);
* n-point weighted bounds (thm-2.2 / 2.6 / 2.9 / 2.17): the value at a
  weighted mixture of self-map values is bounded by a weighted combination
  of the endpoint values, together with the telescoping chain of
  intermediate bounds obtained by peeling one point at a time;
* integral-mean bounds (thm-2.13 / 2.16): the mean of a geometric-mean
  symmetrization is bounded by the geometric mean of the endpoint values,
  and the plain integral mean is bounded by the endpoint maximum.

Checks never assume their premises: callers combine these with
``verifier.check_hypotheses``/``falsify_membership`` and label a failed
conclusion "vacuous" when the premises already fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .convexity import (ConvexityClass, DomainError, checked_value,
                        godunova_levin, phi_p, phi_s_convex, quasi_convex)
from .functions import CodomainError, PhiMap, RealFunction
from .expressions import substitute
from .numerics import QuadratureResult, SearchBudget, integrate
from .tolerances import EPS_DEG, WEIGHT_SUM_TOL
from .verifier import (HypothesisReport, Verdict, check_hypotheses,
                       falsify_membership, normalize_theorem_id, premise_class)

__all__ = [
    "BoundChain",
    "CompositionResult",
    "INTEGRAL_THEOREMS",
    "IntegralBound",
    "JENSEN_THEOREMS",
    "JensenInstance",
    "JensenResult",
    "THEOREM_IDS",
    "check_composition",
    "compose",
    "hh_geometric_margin",
    "jensen_class_for",
    "jensen_margin",
    "quasi_integral_margin",
]

THEOREM_IDS = ("thm-2.1", "thm-2.2", "thm-2.4", "thm-2.6", "thm-2.7", "thm-2.9",
               "thm-2.12", "thm-2.13", "thm-2.15", "thm-2.16", "thm-2.17")
JENSEN_THEOREMS = ("2.2", "2.6", "2.9", "2.17")
INTEGRAL_THEOREMS = ("2.13", "2.16")


# ---------------------------------------------------------------------------
# Composition

def compose(f: RealFunction, phi: PhiMap) -> RealFunction:
    """The composite f(phi(x)) on phi's interval, keeping f's codomain."""
    return RealFunction(substitute(f.expr, phi.fn.expr), phi.interval, f.codomain)


@dataclass(frozen=True)
class CompositionResult:
    theorem_id: str
    hypotheses: HypothesisReport
    verdict: Verdict

    @property
    def hypotheses_verified(self) -> bool:
        return self.hypotheses.verified

    @property
    def label(self) -> str:
        return "hypotheses verified" if self.hypotheses_verified else "hypotheses unverified"


def check_composition(theorem_id: str, f: RealFunction, phi: PhiMap,
                      budget: Optional[SearchBudget] = None,
                      s: float = 0.5) -> CompositionResult:
    """Search for a counterexample to the composite's plain-class membership.

    The conclusion is checked either way; when a hypothesis branch fails
    numerically the result is labeled "hypotheses unverified".
    """
    tid = normalize_theorem_id(theorem_id)
    report = check_hypotheses(tid, f, phi, budget, s=s)
    target = premise_class(tid, s)
    composite = compose(f, phi)
    identity = PhiMap.identity(composite.domain)
    verdict = falsify_membership(composite, identity, target, budget)
    return CompositionResult(tid, report, verdict)


# ---------------------------------------------------------------------------
# n-point weighted bounds

@dataclass(frozen=True)
class JensenInstance:
    """Weights in (0,1) summing to one, with matching probe points."""

    weights: tuple[float, ...]
    points: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "points", tuple(float(p) for p in self.points))
        if len(self.weights) < 2:
            raise ValueError("need at least 2 weighted points")
        if len(self.weights) != len(self.points):
            raise ValueError("weights and points must have the same length")
        for w in self.weights:
            if not 0.0 < w < 1.0:
                raise ValueError(f"every weight must lie in (0,1), got {w!r}")
        total = _sum(self.weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {total!r}")

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class BoundChain:
    """Intermediate bounds from peeling one point per step.

    The first element is the mixture value, the last is the final bound;
    every step of a valid proof chain is non-decreasing.
    """

    values: tuple[float, ...]

    def max_step_violation(self) -> float:
        return max(a - b for a, b in zip(self.values, self.values[1:]))

    def is_monotone(self, tol: float = 1e-9) -> bool:
        return self.max_step_violation() <= tol


@dataclass(frozen=True)
class JensenResult:
    lhs: float
    rhs: float
    margin: float
    chain: BoundChain


def jensen_class_for(theorem_id: str, s: float = 0.5) -> ConvexityClass:
    tid = normalize_theorem_id(theorem_id)
    if tid == "2.2":
        return phi_s_convex(s)
    if tid == "2.6":
        return godunova_levin()
    if tid == "2.9":
        return phi_p()
    if tid == "2.17":
        return quasi_convex()
    raise ValueError(f"theorem {theorem_id!r} has no n-point bound")


def _sum(values) -> float:
    total = 0.0
    for v in values:
        total += v
    return total


def jensen_margin(cls: ConvexityClass, f: RealFunction, phi: PhiMap,
                  instance: JensenInstance) -> JensenResult:
    """Margin of the n-point bound plus the telescoping chain.

    The chain entry for k leading points is
    ``h(T_k) * f(sum_{i<=k} (t_i/T_k) p_i) + sum_{i>k} h(t_i) f(p_i)``
    (with the reciprocal modulator applied as a division, and max in place
    of the sum for the quasi class), where ``T_k`` is the prefix weight
    sum.  The first entry is the full mixture value and the last equals
    the directly computed right side.
    """
    if cls.kind == "log":
        raise ValueError("the log class has no n-point bound; use the h-modulated or quasi classes")
    iv = f.domain
    if phi.interval != iv:
        raise ValueError("f and phi must share one interval")
    for p in instance.points:
        if not iv.contains(p, tol=1e-12):
            raise DomainError(f"point {p!r} outside [{iv.lo}, {iv.hi}]")

    w = instance.weights
    n = instance.n
    req = cls.codomain_requirement
    pv = [phi(p) for p in instance.points]
    fp = [checked_value(f, v, req) for v in pv]

    prefix = []
    total = 0.0
    for wi in w:
        total += wi
        prefix.append(total)

    def mixture(k: int, norm: Optional[float]) -> float:
        m = 0.0
        if norm is None:
            for i in range(k):
                m += w[i] * pv[i]
        else:
            for i in range(k):
                m += (w[i] / norm) * pv[i]
        if not iv.contains(m, tol=1e-9):
            raise DomainError(f"partial mixture of the first {k} points leaves the interval: {m!r}")
        return m

    quasi = cls.kind == "quasi"
    if quasi:
        terms = fp
    elif cls.h.kind == "reciprocal":
        terms = [fp[i] / w[i] for i in range(n)]
    else:
        terms = [cls.h.value(w[i]) * fp[i] for i in range(n)]

    lhs = checked_value(f, mixture(n, None), req)

    chain = [lhs]
    for k in range(n - 1, 0, -1):
        head_value = checked_value(f, mixture(k, prefix[k - 1]), req)
        if quasi:
            bound = head_value
            for t in terms[k:]:
                bound = max(bound, t)
        else:
            if cls.h.kind == "reciprocal":
                bound = head_value / prefix[k - 1]
            else:
                bound = cls.h.value(prefix[k - 1]) * head_value
            for t in terms[k:]:
                bound += t
        chain.append(bound)

    if quasi:
        rhs = terms[0]
        for t in terms[1:]:
            rhs = max(rhs, t)
    else:
        rhs = _sum(terms)
    return JensenResult(lhs, rhs, rhs - lhs, BoundChain(tuple(chain)))


# ---------------------------------------------------------------------------
# Integral-mean bounds

@dataclass(frozen=True)
class IntegralBound:
    margin: float
    mean_value: float
    bound: float
    quadrature: Optional[QuadratureResult]
    degenerate: bool


def _positive(f: RealFunction, u: float) -> float:
    v = f(u)
    if v <= 0.0:
        raise CodomainError(f"nonpositive f value encountered: f({u!r}) = {v!r}")
    return v


def hh_geometric_margin(f: RealFunction, phi: PhiMap, a: float, b: float,
                        tol: float = 1e-9) -> IntegralBound:
    """Geometric-mean integral bound between the images of a and b.

    Compares the mean of sqrt(f(x) * f(p(a)+p(b)-x)) over the image
    interval against sqrt(f(p(a)) * f(p(b))).  The mean is made
    orientation-independent by integrating over [min, max] and dividing by
    the positive width, so the margin is symmetric in (a, b) up to
    quadrature error.  A collapsed image interval is flagged degenerate
    with margin 0 (the pointwise limit).
    """
    iv = f.domain
    if phi.interval != iv:
        raise ValueError("f and phi must share one interval")
    for u in (a, b):
        if not iv.contains(u, tol=1e-9):
            raise DomainError(f"endpoint {u!r} outside [{iv.lo}, {iv.hi}]")
    pa, pb = phi(a), phi(b)
    fa, fb = _positive(f, pa), _positive(f, pb)
    bound = math.sqrt(fa * fb)
    if abs(pb - pa) <= EPS_DEG:
        return IntegralBound(0.0, bound, bound, None, True)

    lo, hi = (pa, pb) if pa < pb else (pb, pa)
    reflect_about = pa + pb

    def integrand(u: float) -> float:
        return math.sqrt(_positive(f, u) * _positive(f, reflect_about - u))

    qr = integrate(integrand, lo, hi, tol)
    mean = qr.value / (hi - lo)
    return IntegralBound(bound - mean, mean, bound, qr, False)


def quasi_integral_margin(f: RealFunction, phi: PhiMap, x: float, y: float,
                          tol: float = 1e-9) -> IntegralBound:
    """Integral mean of f between the images of x < y versus the endpoint max.

    A collapsed image interval is flagged degenerate with margin 0.
    """
    if not x < y:
        raise ValueError(f"need x < y, got x={x!r}, y={y!r}")
    iv = f.domain
    if phi.interval != iv:
        raise ValueError("f and phi must share one interval")
    for u in (x, y):
        if not iv.contains(u, tol=1e-9):
            raise DomainError(f"endpoint {u!r} outside [{iv.lo}, {iv.hi}]")
    px, py = phi(x), phi(y)
    fx, fy = f(px), f(py)
    bound = max(fx, fy)
    if abs(py - px) <= EPS_DEG:
        return IntegralBound(0.0, fx, bound, None, True)

    lo, hi = (px, py) if px < py else (py, px)
    qr = integrate(f, lo, hi, tol)
    mean = qr.value / (hi - lo)
    return IntegralBound(bound - mean, mean, bound, qr, False)
