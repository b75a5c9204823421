"""Built-in catalog of (f, phi, class) triples with known expectations.

Members are genuinely in class on the whole interval (so every search,
chain step, and composition check should come back clean); non-members
carry a violation large enough for the default search to find.  The
catalog covers all six classes on both sides and includes affine
self-maps as well as convex self-maps paired with increasing functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .convexity import ConvexityClass, class_from_name
from .functions import PhiMap, RealFunction

__all__ = ["CATALOG", "CatalogEntry", "composition_pairs", "members", "non_members"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    f_text: str
    phi_text: str
    lo: float
    hi: float
    class_name: str
    member: bool
    s: Optional[float] = None
    note: str = ""

    def convexity_class(self) -> ConvexityClass:
        return class_from_name(self.class_name, self.s)

    def f(self) -> RealFunction:
        codomain = self.convexity_class().codomain_requirement
        return RealFunction.from_text(self.f_text, self.lo, self.hi, codomain)

    def phi(self) -> PhiMap:
        return PhiMap.from_text(self.phi_text, self.lo, self.hi)

    def describe(self) -> str:
        cls = self.convexity_class().describe()
        side = "member" if self.member else "non-member"
        return f"{self.name}: f={self.f_text}, phi={self.phi_text} on [{self.lo}, {self.hi}], {cls}, {side}"


# The composition result matching each class (the plain-convex class has none).
_COMPOSITION_FOR_CLASS = {
    "phi-s-convex": "2.1",
    "phi-godunova-levin": "2.4",
    "phi-p": "2.7",
    "log-phi-convex": "2.12",
    "phi-quasi-convex": "2.15",
}

CATALOG: tuple[CatalogEntry, ...] = (
    # --- members -----------------------------------------------------------
    CatalogEntry("square-id-convex", "x^2", "x", 0.0, 1.0, "phi-convex", True,
                 note="convex on [0,1]"),
    CatalogEntry("exp-square-convex", "exp(x)", "x^2", 0.0, 1.0, "phi-convex", True,
                 note="increasing f with a convex self-map"),
    CatalogEntry("abs-halfscale-convex", "abs(x)", "0.5*x", -1.0, 1.0, "phi-convex", True,
                 note="convex f with an affine contraction"),
    CatalogEntry("sqrt-id-sconvex", "sqrt(x)", "x", 0.0, 1.0, "phi-s-convex", True, s=0.5,
                 note="x^s is s-power bounded: subadditivity plus (tu)^s = t^s u^s"),
    CatalogEntry("square-affine-sconvex", "x^2", "0.5*x+0.25", 0.0, 1.0, "phi-s-convex", True, s=0.5,
                 note="nonnegative convex implies the s-power bound"),
    CatalogEntry("exp-square-sconvex", "exp(x)", "x^2", 0.0, 1.0, "phi-s-convex", True, s=0.5,
                 note="increasing f with a convex self-map"),
    CatalogEntry("square-id-gl", "x^2", "x", 0.0, 1.0, "phi-godunova-levin", True,
                 note="nonnegative convex sits inside the reciprocal class"),
    CatalogEntry("exp-square-gl", "exp(x)", "x^2", 0.0, 1.0, "phi-godunova-levin", True,
                 note="increasing f with a convex self-map"),
    CatalogEntry("one-square-p", "1", "x^2", 0.0, 1.0, "phi-p", True,
                 note="constants satisfy the sum bound"),
    CatalogEntry("abs-id-p", "abs(x)", "x", -1.0, 1.0, "phi-p", True,
                 note="triangle inequality"),
    CatalogEntry("exp-id-log", "exp(x)", "x", 0.0, 1.0, "log-phi-convex", True,
                 note="canonical log-convex equality family"),
    CatalogEntry("exp-affine-log", "exp(x)", "0.5*x+0.2", 0.0, 1.0, "log-phi-convex", True,
                 note="log-affine: equality at every probe"),
    CatalogEntry("expsquare-id-log", "exp(x^2)", "x", 0.0, 1.0, "log-phi-convex", True,
                 note="log f = x^2 is convex"),
    CatalogEntry("exp-square-log", "exp(x)", "x^2", 0.0, 1.0, "log-phi-convex", True,
                 note="increasing f with a convex self-map"),
    CatalogEntry("sqrt-id-quasi", "sqrt(x)", "x", 0.0, 1.0, "phi-quasi-convex", True,
                 note="monotone implies quasi-convex"),
    CatalogEntry("square-id-quasi", "x^2", "x", -1.0, 1.0, "phi-quasi-convex", True,
                 note="unimodal with interior minimum"),
    CatalogEntry("exp-square-quasi", "exp(x)", "x^2", 0.0, 1.0, "phi-quasi-convex", True,
                 note="increasing f with a convex self-map"),
    # --- non-members -------------------------------------------------------
    CatalogEntry("sqrt-id-not-convex", "sqrt(x)", "x", 0.0, 1.0, "phi-convex", False,
                 note="strictly concave: worst margin -0.25 at (0, 1, 3/4)"),
    CatalogEntry("sqrt-affine-not-convex", "sqrt(x)", "0.5*x+0.5", 0.0, 1.0, "phi-convex", False,
                 note="concavity survives the affine reparametrization"),
    CatalogEntry("sqrt-id-not-sconvex", "sqrt(x)", "x", 0.0, 1.0, "phi-s-convex", False, s=0.9,
                 note="t^0.9 weights are too small for a square root"),
    CatalogEntry("bump-id-not-gl", "exp(-25*x^2)", "x", -1.0, 1.0, "phi-godunova-levin", False,
                 note="interior spike dwarfs both endpoint values"),
    CatalogEntry("bump-id-not-p", "exp(-25*x^2)", "x", -1.0, 1.0, "phi-p", False,
                 note="interior spike dwarfs the endpoint sum"),
    CatalogEntry("square-id-not-log", "x^2", "x", 0.1, 1.0, "log-phi-convex", False,
                 note="log(x^2) is concave"),
    CatalogEntry("bump-id-not-quasi", "exp(-25*x^2)", "x", -1.0, 1.0, "phi-quasi-convex", False,
                 note="interior spike exceeds the endpoint max"),
)


def members() -> tuple[CatalogEntry, ...]:
    return tuple(e for e in CATALOG if e.member)


def non_members() -> tuple[CatalogEntry, ...]:
    return tuple(e for e in CATALOG if not e.member)


def composition_pairs() -> tuple[tuple[CatalogEntry, str], ...]:
    """Member entries paired with the composition result they exercise."""
    pairs = []
    for entry in members():
        tid = _COMPOSITION_FOR_CLASS.get(entry.class_name)
        if tid is not None:
            pairs.append((entry, tid))
    return tuple(pairs)
