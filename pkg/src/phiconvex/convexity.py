"""The six membership classes and their pointwise defect.

Each class is defined by an inequality comparing f at a mixture of two
self-map values against a combination of the endpoint values:

    h-modulated:  f(t·p(x) + (1-t)·p(y)) <= h(t)·f(p(x)) + h(1-t)·f(p(y))
    log:          f(t·p(x) + (1-t)·p(y)) <= f(p(x))^t · f(p(y))^(1-t)
    quasi:        f(t·p(x) + (1-t)·p(y)) <= max(f(p(x)), f(p(y)))

with the four h modulators t, t^s, 1/t, and 1.  The *margin* at a point
is right side minus left side; membership at the point means margin >= 0.
For the log class the margin is computed in log scale, which has the same
sign as the multiplicative defect whenever all values are positive and
cannot overflow for products of large values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .functions import Codomain, CodomainError, PhiMap, RealFunction
from .tolerances import DELTA_T, EPS_EVAL, EPS_POS

__all__ = [
    "CLASS_NAMES",
    "ConvexityClass",
    "DefectPoint",
    "DomainError",
    "HSpec",
    "checked_value",
    "class_from_name",
    "defect",
    "defect_margins",
    "godunova_levin",
    "h_value",
    "log_phi_convex",
    "phi_convex",
    "phi_p",
    "phi_s_convex",
    "quasi_convex",
]


class DomainError(Exception):
    """An argument fell outside the domain a definition quantifies over."""


_H_KINDS = ("identity", "power", "reciprocal", "one")


@dataclass(frozen=True)
class HSpec:
    """Modulator h on (0,1): t, t^s, 1/t, or 1."""

    kind: str
    s: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _H_KINDS:
            raise ValueError(f"unknown modulator kind {self.kind!r}")
        if self.kind == "power":
            if self.s is None:
                raise ValueError("power modulator needs an exponent")
            object.__setattr__(self, "s", float(self.s))
            # s = 1 is accepted as the limiting case and coincides with identity.
            if not 0.0 < self.s <= 1.0:
                raise ValueError(f"power exponent must lie in (0, 1], got {self.s!r}")
        elif self.s is not None:
            raise ValueError(f"{self.kind} modulator takes no exponent")

    @staticmethod
    def identity() -> "HSpec":
        return HSpec("identity")

    @staticmethod
    def power(s: float) -> "HSpec":
        return HSpec("power", s)

    @staticmethod
    def reciprocal() -> "HSpec":
        return HSpec("reciprocal")

    @staticmethod
    def one() -> "HSpec":
        return HSpec("one")

    def value(self, t: float) -> float:
        # Lenient on the upper end (prefix weight sums reach 1); strictly
        # positive arguments only.
        if t <= 0.0:
            raise DomainError(f"modulator argument must be positive, got {t!r}")
        if self.kind == "identity":
            return t
        if self.kind == "power":
            return t ** self.s
        if self.kind == "reciprocal":
            return 1.0 / t
        return 1.0

    @property
    def label(self) -> str:
        return {"identity": "t", "power": f"t^{self.s}", "reciprocal": "1/t", "one": "1"}[self.kind]


def h_value(h: HSpec, t: float) -> float:
    """Modulator value for t in the open unit interval."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"h is defined on (0,1), got t={t!r}")
    return h.value(t)


_CLASS_KINDS = ("h", "log", "quasi")


@dataclass(frozen=True)
class ConvexityClass:
    kind: str  # "h" | "log" | "quasi"
    h: Optional[HSpec] = None

    def __post_init__(self):
        if self.kind not in _CLASS_KINDS:
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.kind == "h" and self.h is None:
            raise ValueError("h-modulated classes need a modulator")
        if self.kind != "h" and self.h is not None:
            raise ValueError(f"{self.kind} class takes no modulator")

    @property
    def t_open(self) -> bool:
        """h-modulated classes quantify over the open unit interval."""
        return self.kind == "h"

    def t_box(self) -> tuple[float, float]:
        if self.t_open:
            return (DELTA_T, 1.0 - DELTA_T)
        return (0.0, 1.0)

    def t_valid(self, t: float) -> bool:
        if self.t_open:
            return 0.0 < t < 1.0
        return 0.0 <= t <= 1.0

    @property
    def codomain_requirement(self) -> Codomain:
        # The log class needs strictly positive values for the logarithms.
        # The max comparison is well defined for any values, so the quasi
        # class is gated at nonnegativity like the h-modulated ones (zero
        # values, e.g. sqrt at 0, are common and harmless).
        if self.kind == "log":
            return Codomain.STRICTLY_POSITIVE
        return Codomain.NONNEGATIVE

    @property
    def name(self) -> str:
        if self.kind == "log":
            return "log-phi-convex"
        if self.kind == "quasi":
            return "phi-quasi-convex"
        return {
            "identity": "phi-convex",
            "power": "phi-s-convex",
            "reciprocal": "phi-godunova-levin",
            "one": "phi-p",
        }[self.h.kind]

    def describe(self) -> str:
        if self.kind == "h" and self.h.kind == "power":
            return f"{self.name}(s={self.h.s})"
        return self.name


def phi_convex() -> ConvexityClass:
    return ConvexityClass("h", HSpec.identity())


def phi_s_convex(s: float) -> ConvexityClass:
    return ConvexityClass("h", HSpec.power(s))


def godunova_levin() -> ConvexityClass:
    return ConvexityClass("h", HSpec.reciprocal())


def phi_p() -> ConvexityClass:
    return ConvexityClass("h", HSpec.one())


def log_phi_convex() -> ConvexityClass:
    return ConvexityClass("log")


def quasi_convex() -> ConvexityClass:
    return ConvexityClass("quasi")


CLASS_NAMES = (
    "phi-convex",
    "phi-s-convex",
    "phi-godunova-levin",
    "phi-p",
    "log-phi-convex",
    "phi-quasi-convex",
)


def class_from_name(name: str, s: Optional[float] = None) -> ConvexityClass:
    key = name.strip().lower()
    if key == "phi-convex":
        return phi_convex()
    if key == "phi-s-convex":
        if s is None:
            raise ValueError("phi-s-convex needs the exponent parameter 's'")
        return phi_s_convex(s)
    if key == "phi-godunova-levin":
        return godunova_levin()
    if key == "phi-p":
        return phi_p()
    if key == "log-phi-convex":
        return log_phi_convex()
    if key == "phi-quasi-convex":
        return quasi_convex()
    raise ValueError(f"unknown class {name!r}; expected one of {', '.join(CLASS_NAMES)}")


@dataclass(frozen=True)
class DefectPoint:
    """A probe (x, y, t) with both sides of the defining inequality.

    For the log class, lhs and rhs are the multiplicative sides but the
    margin is their log-scale difference.
    """

    x: float
    y: float
    t: float
    lhs: float
    rhs: float
    margin: float


def checked_value(f: RealFunction, u: float, requirement: Codomain) -> float:
    """Evaluate f and enforce a class codomain requirement at the value."""
    v = f(u)
    if requirement is Codomain.NONNEGATIVE and v < -EPS_EVAL:
        raise CodomainError(f"class requires nonnegative values, but f({u!r}) = {v!r}")
    if requirement is Codomain.STRICTLY_POSITIVE and v < EPS_POS:
        raise CodomainError(f"class requires strictly positive values, but f({u!r}) = {v!r}")
    return v


def defect(cls: ConvexityClass, f: RealFunction, phi: PhiMap,
           x: float, y: float, t: float) -> DefectPoint:
    """Pointwise defect of the class inequality at (x, y, t)."""
    iv = f.domain
    if phi.interval != iv:
        raise ValueError("f and phi must share one interval")
    if not (iv.contains(x, tol=1e-9) and iv.contains(y, tol=1e-9)):
        raise DomainError(f"probe points ({x!r}, {y!r}) outside [{iv.lo}, {iv.hi}]")
    if not cls.t_valid(t):
        bounds = "(0,1)" if cls.t_open else "[0,1]"
        raise DomainError(f"t={t!r} outside {bounds} for {cls.name}")

    px, py = phi(x), phi(y)
    mixed = t * px + (1.0 - t) * py
    req = cls.codomain_requirement
    fx = checked_value(f, px, req)
    fy = checked_value(f, py, req)
    fm = checked_value(f, mixed, req)

    if cls.kind == "h":
        rhs = h_value(cls.h, t) * fx + h_value(cls.h, 1.0 - t) * fy
        margin = rhs - fm
    elif cls.kind == "quasi":
        rhs = max(fx, fy)
        margin = rhs - fm
    else:
        log_rhs = t * math.log(fx) + (1.0 - t) * math.log(fy)
        margin = log_rhs - math.log(fm)
        try:
            rhs = math.exp(log_rhs)
        except OverflowError:
            rhs = math.inf
    return DefectPoint(x, y, t, fm, rhs, margin)


def _h_array(h: HSpec, t: np.ndarray) -> np.ndarray:
    if h.kind == "identity":
        return t
    if h.kind == "power":
        return np.power(t, h.s)
    if h.kind == "reciprocal":
        return 1.0 / t
    return np.ones_like(t)


def defect_margins(cls: ConvexityClass, f: RealFunction, phi: PhiMap,
                   xs: np.ndarray, ys: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Vectorized margins with NaN wherever evaluation broke down.

    No codomain gate runs here; callers validate f on a dense grid first
    and re-verify any candidate witness through the scalar path.
    """
    with np.errstate(all="ignore"):
        px = phi.values(xs)
        py = phi.values(ys)
        fx = f.values(px)
        fy = f.values(py)
        fm = f.values(ts * px + (1.0 - ts) * py)
        if cls.kind == "h":
            margins = _h_array(cls.h, ts) * fx + _h_array(cls.h, 1.0 - ts) * fy - fm
        elif cls.kind == "quasi":
            margins = np.maximum(fx, fy) - fm
        else:
            margins = ts * np.log(fx) + (1.0 - ts) * np.log(fy) - np.log(fm)
    return np.where(np.isfinite(margins), margins, np.nan)
