"""Adaptive quadrature and derivative-free minimization.

Quadrature is adaptive Simpson with recursive interval halving and a
Richardson error estimate; minimization is a coarse grid scan followed by
Nelder-Mead refinement from the best grid points.  Both are fully
deterministic: grids are uniform, ties resolve to the lexicographically
first point, and the simplex moves use fixed coefficients (reflection 1,
expansion 2, contraction 0.5, shrink 0.5).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .convexity import DomainError
from .expressions import EvalError
from .tolerances import TOL_MARGIN

__all__ = [
    "MinimizeResult",
    "QuadratureResult",
    "SearchBudget",
    "integrate",
    "minimize",
]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    tolerance_met: bool


def integrate(g: Callable[[float], float], lo: float, hi: float,
              tol: float = 1e-9, max_depth: int = 50) -> QuadratureResult:
    """Adaptive-Simpson integral of g over [lo, hi].

    The error estimate is the accumulated Richardson estimate of the
    accepted panels.  When recursion depth runs out before the local
    tolerance is met, the best value is still returned with
    ``tolerance_met=False``.  Evaluation errors raised by g propagate.
    """
    if not lo < hi:
        raise ValueError(f"integration needs lo < hi, got [{lo!r}, {hi!r}]")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    evaluations = 0

    def call(u: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return float(g(u))

    def panel(a: float, fa: float, b: float, fb: float) -> tuple[float, float, float]:
        m = 0.5 * (a + b)
        fm = call(m)
        return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def refine(a, fa, m, fm, b, fb, whole, tol_here, depth):
        lm, flm, left = panel(a, fa, m, fm)
        rm, frm, right = panel(m, fm, b, fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol_here or depth >= max_depth:
            return left + right + delta / 15.0, abs(delta) / 15.0, abs(delta) <= 15.0 * tol_here
        lv, le, lok = refine(a, fa, lm, flm, m, fm, left, 0.5 * tol_here, depth + 1)
        rv, re, rok = refine(m, fm, rm, frm, b, fb, right, 0.5 * tol_here, depth + 1)
        return lv + rv, le + re, lok and rok

    fa, fb = call(lo), call(hi)
    m, fm, whole = panel(lo, fa, hi, fb)
    value, err, met = refine(lo, fa, m, fm, hi, fb, whole, tol, 0)
    return QuadratureResult(value, err, evaluations, met)


@dataclass(frozen=True)
class SearchBudget:
    """Effort knobs for a counterexample search."""

    grid_per_axis: int = 41
    restarts: int = 8
    max_iterations: int = 200
    seed: int = 0
    tol_margin: float = TOL_MARGIN

    def __post_init__(self):
        if self.grid_per_axis < 1 or self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("budget counts must be >= 1")
        if self.tol_margin <= 0.0:
            raise ValueError("tol_margin must be positive")


@dataclass(frozen=True)
class MinimizeResult:
    point: tuple[float, ...]
    value: float
    evaluations: int
    eval_failures: int
    grid_points: int
    grid_failures: int
    grid_best_point: tuple[float, ...]
    grid_best_value: float


# Exceptions a search treats as "this probe failed, skip it".
_SKIPPED_ERRORS = (EvalError, DomainError)


def minimize(objective: Callable[[tuple[float, ...]], float],
             box: Sequence[tuple[float, float]],
             budget: SearchBudget,
             batch_objective: Optional[Callable[[np.ndarray], np.ndarray]] = None,
             skipped_errors: tuple = _SKIPPED_ERRORS) -> MinimizeResult:
    """Grid scan plus Nelder-Mead refinement over a box.

    Failed probes (skipped_errors or non-finite values) count toward
    ``eval_failures`` and act as +inf.  ``batch_objective``, when given,
    evaluates the whole grid at once and must return NaN for failures.
    The result never exceeds the best coarse-grid value.
    """
    box = [(float(lo), float(hi)) for lo, hi in box]
    for lo, hi in box:
        if not lo < hi:
            raise ValueError(f"degenerate search box axis [{lo!r}, {hi!r}]")

    evaluations = 0
    failures = 0

    def safe(pt: np.ndarray) -> float:
        nonlocal evaluations, failures
        for j, (lo, hi) in enumerate(box):
            if pt[j] < lo or pt[j] > hi:
                return math.inf
        evaluations += 1
        try:
            v = float(objective(tuple(float(c) for c in pt)))
        except skipped_errors:
            failures += 1
            return math.inf
        if not math.isfinite(v):
            failures += 1
            return math.inf
        return v

    axes = [np.linspace(lo, hi, budget.grid_per_axis) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    n_grid = len(pts)

    if batch_objective is not None:
        vals = np.asarray(batch_objective(pts), dtype=float).reshape(-1)
        if vals.shape != (n_grid,):
            raise ValueError("batch objective returned a misshapen array")
    else:
        vals = np.empty(n_grid)
        for i, p in enumerate(pts):
            try:
                vals[i] = float(objective(tuple(float(c) for c in p)))
            except skipped_errors:
                vals[i] = np.nan
    bad = ~np.isfinite(vals)
    grid_failures = int(bad.sum())
    vals = np.where(bad, np.inf, vals)
    evaluations += n_grid
    failures += grid_failures

    # Stable sort: ties resolve to the lexicographically first grid point.
    order = np.argsort(vals, kind="stable")
    grid_best_point = tuple(float(c) for c in pts[order[0]])
    grid_best_value = float(vals[order[0]])

    best_point, best_value = grid_best_point, grid_best_value
    for idx in order[: budget.restarts]:
        pt, v = _nelder_mead(safe, pts[idx], box, budget.max_iterations)
        if v < best_value:
            best_point, best_value = tuple(float(c) for c in pt), v

    return MinimizeResult(best_point, best_value, evaluations, failures,
                          n_grid, grid_failures, grid_best_point, grid_best_value)


def _nelder_mead(fn, x0: np.ndarray, box, max_iterations: int,
                 diameter_tol: float = 1e-10) -> tuple[np.ndarray, float]:
    n = len(x0)
    x0 = np.asarray(x0, dtype=float)
    sim = [x0.copy()]
    for j in range(n):
        step = 0.1 * (box[j][1] - box[j][0])
        if x0[j] + step > box[j][1]:
            step = -step
        v = x0.copy()
        v[j] += step
        sim.append(v)
    fv = [fn(v) for v in sim]

    for _ in range(max_iterations):
        order = np.argsort(fv, kind="stable")
        sim = [sim[i] for i in order]
        fv = [fv[i] for i in order]
        diameter = max(float(np.max(np.abs(v - sim[0]))) for v in sim[1:])
        if diameter < diameter_tol:
            break
        centroid = np.mean(sim[:-1], axis=0)
        reflected = centroid + (centroid - sim[-1])
        fr = fn(reflected)
        if fr < fv[0]:
            expanded = centroid + 2.0 * (reflected - centroid)
            fe = fn(expanded)
            if fe < fr:
                sim[-1], fv[-1] = expanded, fe
            else:
                sim[-1], fv[-1] = reflected, fr
        elif fr < fv[-2]:
            sim[-1], fv[-1] = reflected, fr
        else:
            if fr < fv[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
                fc = fn(contracted)
                if fc <= fr:
                    sim[-1], fv[-1] = contracted, fc
                else:
                    sim, fv = _shrink(fn, sim, fv)
            else:
                contracted = centroid + 0.5 * (sim[-1] - centroid)
                fc = fn(contracted)
                if fc < fv[-1]:
                    sim[-1], fv[-1] = contracted, fc
                else:
                    sim, fv = _shrink(fn, sim, fv)

    order = np.argsort(fv, kind="stable")
    return sim[order[0]], fv[order[0]]


def _shrink(fn, sim, fv):
    best = sim[0]
    new_sim = [best]
    new_fv = [fv[0]]
    for v in sim[1:]:
        shrunk = best + 0.5 * (v - best)
        new_sim.append(shrunk)
        new_fv.append(fn(shrunk))
    return new_sim, new_fv
