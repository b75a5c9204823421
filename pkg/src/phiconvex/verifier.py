"""Counterexample search for class membership, plus hypothesis checking.

:func:`falsify_membership` minimizes the pointwise defect margin over
(x, y, t).  A reported witness is always re-evaluated through the scalar
path in a fresh context, so a ``Falsified`` verdict is sound by
construction.  ``NotFalsified`` is *not* a certificate: it only says no
counterexample was found under the budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .convexity import (ConvexityClass, DefectPoint, DomainError, defect,
                        defect_margins, godunova_levin, log_phi_convex,
                        phi_p, phi_s_convex, quasi_convex)
from .expressions import EvalError
from .functions import (Codomain, CodomainError, HypothesisCheck, PhiMap,
                        RealFunction, check_affine, check_convex_map,
                        check_increasing, check_range)
from .numerics import MinimizeResult, SearchBudget, minimize
from .tolerances import EPS_EVAL, EPS_POS

__all__ = [
    "COMPOSITION_THEOREMS",
    "HypothesisReport",
    "Verdict",
    "VerifierError",
    "check_hypotheses",
    "falsify_membership",
    "normalize_theorem_id",
    "premise_class",
]


class VerifierError(Exception):
    """Preconditions for a search failed (range, domains, pervasive errors)."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a membership search.

    ``falsified`` implies the witness re-evaluates deterministically to a
    margin below -tol_margin.  Otherwise ``min_margin`` is the smallest
    margin observed at the best point found.
    """

    falsified: bool
    witness: Optional[DefectPoint]
    min_margin: float
    points_tested: int
    eval_failures: int

    def summary(self) -> str:
        if self.falsified:
            return f"falsified (witness margin {self.min_margin:.6g})"
        return f"no counterexample found (min margin {self.min_margin:.6g})"


_GATE_GRID = 257


def _preflight(f: RealFunction, phi: PhiMap, cls: ConvexityClass, grid_n: int) -> None:
    if phi.interval != f.domain:
        raise VerifierError("f and phi must be declared on the same interval")
    rc = check_range(phi, max(_GATE_GRID, grid_n))
    if not rc.passed:
        raise VerifierError(
            f"self-map leaves its interval: phi({rc.worst_x!r}) = {rc.worst_value!r}")
    xs = f.domain.grid(max(_GATE_GRID, grid_n))
    vals = f.values(xs)
    finite = np.isfinite(vals)
    req = cls.codomain_requirement
    floor = -EPS_EVAL if req is Codomain.NONNEGATIVE else EPS_POS
    bad = finite & (vals < floor)
    if bad.any():
        i = int(np.argmin(np.where(bad, vals, np.inf)))
        raise CodomainError(
            f"{cls.name} requires {req.value} values, but f({xs[i]!r}) = {vals[i]!r}")


def falsify_membership(f: RealFunction, phi: PhiMap, cls: ConvexityClass,
                       budget: Optional[SearchBudget] = None) -> Verdict:
    """Search for a point where the class inequality fails.

    Hard errors: codomain violations on the preflight grid, a self-map
    escaping its interval, or evaluation failing on more than half of the
    search grid.  Isolated evaluation failures are skipped and tallied.
    """
    if budget is None:
        budget = SearchBudget()
    _preflight(f, phi, cls, budget.grid_per_axis)

    iv = f.domain
    box = [(iv.lo, iv.hi), (iv.lo, iv.hi), cls.t_box()]

    def objective(p: tuple[float, ...]) -> float:
        return defect(cls, f, phi, p[0], p[1], p[2]).margin

    def batch(pts: np.ndarray) -> np.ndarray:
        return defect_margins(cls, f, phi, pts[:, 0], pts[:, 1], pts[:, 2])

    res = minimize(objective, box, budget, batch_objective=batch)
    if 2 * res.grid_failures > res.grid_points:
        raise VerifierError(
            f"evaluation failed on {res.grid_failures} of {res.grid_points} grid points; "
            "the membership question is ill-posed on this domain")
    return _verdict_from(res, f, phi, cls, budget)


def _verdict_from(res: MinimizeResult, f, phi, cls, budget: SearchBudget) -> Verdict:
    # The scalar path is authoritative for the reported margin; the batch
    # grid may differ in the last few ulps.
    witness: Optional[DefectPoint] = None
    try:
        witness = defect(cls, f, phi, *res.point)
        margin = witness.margin
    except (EvalError, DomainError):
        margin = res.value
    if witness is not None and margin < -budget.tol_margin:
        return Verdict(True, witness, margin, res.evaluations, res.eval_failures)
    return Verdict(False, None, margin, res.evaluations, res.eval_failures)


# Composition results share one hypothesis split: either the inner map is
# affine, or the outer function is increasing and the inner map convex.
COMPOSITION_THEOREMS = ("2.1", "2.4", "2.7", "2.12", "2.15")

_ALL_THEOREMS = ("2.1", "2.2", "2.4", "2.6", "2.7", "2.9",
                 "2.12", "2.13", "2.15", "2.16", "2.17")


def normalize_theorem_id(theorem_id: str) -> str:
    tid = theorem_id.strip().lower()
    if tid.startswith("thm-"):
        tid = tid[4:]
    if tid not in _ALL_THEOREMS:
        raise ValueError(f"unknown theorem id {theorem_id!r}")
    return tid


def premise_class(theorem_id: str, s: float = 0.5) -> ConvexityClass:
    """Membership class assumed of f by a composition result."""
    tid = normalize_theorem_id(theorem_id)
    if tid == "2.1":
        return phi_s_convex(s)
    if tid == "2.4":
        return godunova_levin()
    if tid == "2.7":
        return phi_p()
    if tid == "2.12":
        return log_phi_convex()
    if tid == "2.15":
        return quasi_convex()
    raise ValueError(f"theorem {theorem_id!r} is not a composition result")


@dataclass(frozen=True)
class HypothesisReport:
    """Which composition-branch premises hold numerically."""

    theorem_id: str
    premise: ConvexityClass
    phi_affine: HypothesisCheck
    phi_convex: HypothesisCheck
    f_increasing: HypothesisCheck
    premise_verdict: Verdict

    @property
    def branch_linear(self) -> bool:
        return self.phi_affine.passed

    @property
    def branch_monotone_convex(self) -> bool:
        return self.f_increasing.passed and self.phi_convex.passed

    @property
    def any_branch(self) -> bool:
        return self.branch_linear or self.branch_monotone_convex

    @property
    def verified(self) -> bool:
        return self.any_branch and not self.premise_verdict.falsified


def check_hypotheses(theorem_id: str, f: RealFunction, phi: PhiMap,
                     budget: Optional[SearchBudget] = None,
                     s: float = 0.5) -> HypothesisReport:
    """Run the premise checks a composition result needs.

    Checks the interpolation identity and convexity of the self-map,
    monotonicity of f, and searches for a membership counterexample in the
    premise class.
    """
    if budget is None:
        budget = SearchBudget()
    tid = normalize_theorem_id(theorem_id)
    premise = premise_class(tid, s)
    affine = check_affine(phi, seed=budget.seed)
    convex = check_convex_map(phi, seed=budget.seed)
    increasing = check_increasing(f)
    premise_verdict = falsify_membership(f, phi, premise, budget)
    return HypothesisReport(tid, premise, affine, convex, increasing, premise_verdict)
