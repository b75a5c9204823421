"""File-driven command line front end.

Commands:

    phiconvex run <spec.json> [--out report.json] [--seed N] [--parallel]
    phiconvex catalog
    phiconvex eval "<expr>" --at X

An analysis file is a JSON object describing one task, or an object with
a "tasks" list whose entries inherit the top-level keys.  Recognized
keys: "f", "phi", "interval", "class", "s", "task", "theorem", "weights",
"points", "budget", "seed".  Tasks:

    falsify   search for a membership counterexample of (f, phi, class)
    theorem   check one named result ("theorem": "thm-2.1" ... "thm-2.17")
    jensen    n-point bound at the given weights/points
    integral  integral-mean bound (thm-2.13 or thm-2.16)

Exit codes: 0 all checks consistent with the predicted inequalities,
2 at least one falsification where a verified premise predicted
membership (discrepancy flag), 1 usage or evaluation error.

The default seed is 0, overridden by the PHICONVEX_SEED environment
variable, a "seed" key in the file, and the --seed flag, in that order of
increasing precedence.  Reports are deterministic for a fixed spec and
seed, except for the timing fields ("seconds", "wall_time_s").
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from . import __version__
from .catalog import CATALOG
from .convexity import ConvexityClass, DomainError, class_from_name
from .expressions import ExpressionError, evaluate, parse
from .functions import CodomainError, PhiMap, RealFunction
from .inequalities import (INTEGRAL_THEOREMS, JENSEN_THEOREMS, JensenInstance,
                           check_composition, hh_geometric_margin,
                           jensen_class_for, jensen_margin,
                           quasi_integral_margin)
from .numerics import SearchBudget
from .verifier import (COMPOSITION_THEOREMS, VerifierError, falsify_membership,
                       normalize_theorem_id)

__all__ = ["entrypoint", "main"]


class CliError(Exception):
    """Usage-level failure: bad file, bad task, bad arguments."""


_SPEC_KEYS = {"f", "phi", "interval", "class", "s", "task", "theorem",
              "weights", "points", "budget", "seed", "tasks", "name"}
_BUDGET_KEYS = {"grid_per_axis", "restarts", "max_iterations", "tol_margin", "seed"}


@dataclasses.dataclass
class _Task:
    index: int
    kind: str  # "falsify" | "composition" | "jensen" | "integral"
    label: str
    raw: dict
    f: RealFunction
    phi: PhiMap
    budget: SearchBudget
    cls: Optional[ConvexityClass] = None
    theorem: Optional[str] = None
    s: float = 0.5
    instance: Optional[JensenInstance] = None
    points: Optional[tuple[float, float]] = None


def _require(raw: dict, key: str, index: int):
    if key not in raw:
        raise CliError(f"task {index}: missing required key {key!r}")
    return raw[key]


def _build_task(raw: dict, index: int, default_seed: int, force_seed: Optional[int]) -> _Task:
    unknown = set(raw) - _SPEC_KEYS
    if unknown:
        raise CliError(f"task {index}: unknown keys {sorted(unknown)}")

    interval = _require(raw, "interval", index)
    if (not isinstance(interval, (list, tuple))) or len(interval) != 2:
        raise CliError(f"task {index}: 'interval' must be [lo, hi]")
    lo, hi = float(interval[0]), float(interval[1])

    seed = int(raw.get("seed", default_seed))
    if force_seed is not None:
        seed = force_seed
    budget_raw = raw.get("budget", {})
    if not isinstance(budget_raw, dict):
        raise CliError(f"task {index}: 'budget' must be an object")
    unknown = set(budget_raw) - _BUDGET_KEYS
    if unknown:
        raise CliError(f"task {index}: unknown budget keys {sorted(unknown)}")
    budget_args = {k: budget_raw[k] for k in budget_raw if k != "seed"}
    if "seed" in budget_raw and force_seed is None:
        seed = int(budget_raw["seed"])

    task_type = str(raw.get("task", "falsify")).lower()
    s = float(raw.get("s", 0.5))

    try:
        budget = SearchBudget(seed=seed, **budget_args)
        f_text = str(_require(raw, "f", index))
        phi_text = str(_require(raw, "phi", index))
        phi = PhiMap.from_text(phi_text, lo, hi)

        if task_type == "falsify":
            cls = class_from_name(str(_require(raw, "class", index)), s)
            f = RealFunction.from_text(f_text, lo, hi, cls.codomain_requirement)
            return _Task(index, "falsify", f"falsify {cls.describe()}", raw, f, phi, budget, cls=cls, s=s)

        if task_type in ("theorem", "jensen", "integral"):
            tid = normalize_theorem_id(str(_require(raw, "theorem", index))) \
                if (task_type != "jensen" or "theorem" in raw) else None
            if task_type == "jensen" and tid is None:
                cls = class_from_name(str(_require(raw, "class", index)), s)
            elif tid in JENSEN_THEOREMS:
                task_type = "jensen"
                cls = jensen_class_for(tid, s)
            elif tid in INTEGRAL_THEOREMS:
                task_type = "integral"
                cls = class_from_name("log-phi-convex" if tid == "2.13" else "phi-quasi-convex")
            elif tid in COMPOSITION_THEOREMS:
                if task_type == "integral":
                    raise CliError(f"task {index}: thm-{tid} is not an integral bound")
                task_type = "composition"
                cls = None
            else:
                raise CliError(f"task {index}: theorem thm-{tid} not usable for task {task_type!r}")

            if task_type == "composition":
                from .verifier import premise_class
                codomain = premise_class(tid, s).codomain_requirement
                f = RealFunction.from_text(f_text, lo, hi, codomain)
                return _Task(index, "composition", f"thm-{tid}", raw, f, phi, budget, theorem=tid, s=s)

            f = RealFunction.from_text(f_text, lo, hi, cls.codomain_requirement)
            if task_type == "jensen":
                weights = _require(raw, "weights", index)
                points = _require(raw, "points", index)
                instance = JensenInstance(tuple(weights), tuple(points))
                label = f"jensen thm-{tid}" if tid else f"jensen {cls.describe()}"
                return _Task(index, "jensen", label, raw, f, phi, budget,
                             cls=cls, theorem=tid, s=s, instance=instance)
            pts = raw.get("points", [lo, hi])
            if len(pts) != 2:
                raise CliError(f"task {index}: integral tasks take two points")
            return _Task(index, "integral", f"thm-{tid}", raw, f, phi, budget,
                         cls=cls, theorem=tid, s=s, points=(float(pts[0]), float(pts[1])))

        raise CliError(f"task {index}: unknown task type {task_type!r}")
    except CliError:
        raise
    except (ExpressionError, ValueError) as exc:
        raise CliError(f"task {index}: {exc}") from exc


def _verdict_dict(verdict) -> dict:
    out = {
        "outcome": "falsified" if verdict.falsified else "not-falsified",
        "min_margin": verdict.min_margin,
        "points_tested": verdict.points_tested,
        "eval_failures": verdict.eval_failures,
    }
    if verdict.witness is not None:
        out["witness"] = dataclasses.asdict(verdict.witness)
    else:
        out["note"] = "no counterexample found"
    return out


def _hypotheses_dict(report) -> dict:
    def check(c):
        return {"passed": c.passed, "worst": c.worst, "at": list(c.at)}

    return {
        "premise_class": report.premise.describe(),
        "phi_affine": check(report.phi_affine),
        "phi_convex": check(report.phi_convex),
        "f_increasing": check(report.f_increasing),
        "premise_verdict": _verdict_dict(report.premise_verdict),
        "branch_linear": report.branch_linear,
        "branch_monotone_convex": report.branch_monotone_convex,
        "verified": report.verified,
    }


def _quadrature_dict(qr) -> Optional[dict]:
    if qr is None:
        return None
    return {
        "value": qr.value,
        "error_estimate": qr.error_estimate,
        "evaluations": qr.evaluations,
        "tolerance_met": qr.tolerance_met,
    }


def _run_task(task: _Task) -> dict:
    start = time.perf_counter()
    result: dict = {"task": task.label, "kind": task.kind, "seed": task.budget.seed}
    if task.kind == "falsify":
        verdict = falsify_membership(task.f, task.phi, task.cls, task.budget)
        result["verdict"] = _verdict_dict(verdict)
        result["margin"] = verdict.min_margin
        # A bare search carries no membership prediction.
        result["discrepancy"] = False
    elif task.kind == "composition":
        comp = check_composition(task.theorem, task.f, task.phi, task.budget, s=task.s)
        result["theorem"] = f"thm-{comp.theorem_id}"
        result["hypotheses"] = _hypotheses_dict(comp.hypotheses)
        result["label"] = comp.label
        result["verdict"] = _verdict_dict(comp.verdict)
        result["margin"] = comp.verdict.min_margin
        result["discrepancy"] = comp.hypotheses_verified and comp.verdict.falsified
    elif task.kind == "jensen":
        premise = falsify_membership(task.f, task.phi, task.cls, task.budget)
        jr = jensen_margin(task.cls, task.f, task.phi, task.instance)
        vacuous = premise.falsified
        result["theorem"] = f"thm-{task.theorem}" if task.theorem else None
        result["class"] = task.cls.describe()
        result["premise_verdict"] = _verdict_dict(premise)
        result["lhs"] = jr.lhs
        result["rhs"] = jr.rhs
        result["margin"] = jr.margin
        result["chain"] = list(jr.chain.values)
        result["vacuous"] = vacuous
        result["discrepancy"] = (not vacuous) and jr.margin < -task.budget.tol_margin
    else:
        premise = falsify_membership(task.f, task.phi, task.cls, task.budget)
        x, y = task.points
        if task.theorem == "2.13":
            ib = hh_geometric_margin(task.f, task.phi, x, y)
        else:
            ib = quasi_integral_margin(task.f, task.phi, x, y)
        vacuous = premise.falsified
        err = ib.quadrature.error_estimate if ib.quadrature else 0.0
        result["theorem"] = f"thm-{task.theorem}"
        result["premise_verdict"] = _verdict_dict(premise)
        result["margin"] = ib.margin
        result["mean_value"] = ib.mean_value
        result["bound"] = ib.bound
        result["degenerate"] = ib.degenerate
        result["quadrature"] = _quadrature_dict(ib.quadrature)
        result["vacuous"] = vacuous
        result["discrepancy"] = (not vacuous) and ib.margin < -(task.budget.tol_margin + err)
    result["seconds"] = time.perf_counter() - start
    return result


def _resolve_seed(flag_seed: Optional[int], data: dict) -> tuple[int, Optional[int]]:
    """Default seed for tasks, plus the forced seed when --seed was given."""
    if flag_seed is not None:
        return flag_seed, flag_seed
    if "seed" in data:
        return int(data["seed"]), None
    env = os.environ.get("PHICONVEX_SEED")
    if env is not None:
        try:
            return int(env), None
        except ValueError as exc:
            raise CliError(f"PHICONVEX_SEED must be an integer, got {env!r}") from exc
    return 0, None


def _cmd_run(args) -> int:
    spec_path = Path(args.spec)
    try:
        text = spec_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {spec_path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(
            f"{spec_path}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise CliError(f"{spec_path}: top level must be a JSON object")

    default_seed, force_seed = _resolve_seed(args.seed, data)
    if "tasks" in data:
        if not isinstance(data["tasks"], list) or not data["tasks"]:
            raise CliError(f"{spec_path}: 'tasks' must be a non-empty list")
        shared = {k: v for k, v in data.items() if k != "tasks"}
        raw_tasks = [{**shared, **t} for t in data["tasks"]]
    else:
        raw_tasks = [data]
    tasks = [_build_task(raw, i, default_seed, force_seed) for i, raw in enumerate(raw_tasks)]

    started = time.perf_counter()
    errors = 0
    if args.parallel and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(tasks))) as pool:
            results = list(pool.map(_run_one_guarded, tasks))
    else:
        results = [_run_one_guarded(t) for t in tasks]
    for r in results:
        if "error" in r:
            errors += 1

    report = {
        "toolkit_version": __version__,
        "seed": default_seed if force_seed is None else force_seed,
        "spec": data,
        "tasks": results,
        "wall_time_s": time.perf_counter() - started,
    }
    out_path = Path(args.out) if args.out else spec_path.with_suffix(".report.json")
    out_path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")

    print(f"{'task':<28} {'verdict':<24} {'margin':>14} {'seconds':>9}")
    print("-" * 78)
    for r in results:
        if "error" in r:
            verdict, margin = "error", float("nan")
        elif r["kind"] == "falsify" or r["kind"] == "composition":
            verdict, margin = r["verdict"]["outcome"], r["margin"]
            if r.get("discrepancy"):
                verdict += " (DISCREPANCY)"
        else:
            holds = r["margin"] >= -1e-9 if not r.get("vacuous") else None
            verdict = "vacuous" if r.get("vacuous") else ("holds" if holds else "VIOLATED")
            margin = r["margin"]
        print(f"{r['task']:<28} {verdict:<24} {margin:>14.6g} {r['seconds']:>9.3f}")
    print(f"report written to {out_path}")

    if errors:
        return 1
    if any(r.get("discrepancy") for r in results):
        return 2
    return 0


def _run_one_guarded(task: _Task) -> dict:
    try:
        return _run_task(task)
    except (ExpressionError, CodomainError, DomainError, VerifierError, ValueError) as exc:
        return {"task": task.label, "kind": task.kind, "seed": task.budget.seed,
                "error": str(exc), "seconds": 0.0}


def _cmd_catalog(args) -> int:
    print(f"{'name':<26} {'f':<16} {'phi':<12} {'interval':<14} {'class':<24} expected")
    print("-" * 104)
    for entry in CATALOG:
        interval = f"[{entry.lo:g}, {entry.hi:g}]"
        cls = entry.convexity_class().describe()
        side = "member" if entry.member else "non-member"
        print(f"{entry.name:<26} {entry.f_text:<16} {entry.phi_text:<12} {interval:<14} {cls:<24} {side}")
    return 0


def _cmd_eval(args) -> int:
    value = evaluate(parse(args.expression), args.at)
    print(repr(value))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="phiconvex",
        description="Membership searches and inequality checks for self-map convexity classes.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute the tasks in a JSON analysis file")
    run_p.add_argument("spec", help="path to the analysis JSON file")
    run_p.add_argument("--out", help="report path (default: <spec>.report.json)")
    run_p.add_argument("--seed", type=int, help="override every task seed")
    run_p.add_argument("--parallel", action="store_true", help="run independent tasks concurrently")

    sub.add_parser("catalog", help="list the built-in (f, phi, class) catalog")

    eval_p = sub.add_parser("eval", help="parse an expression and evaluate it at a point")
    eval_p.add_argument("expression")
    eval_p.add_argument("--at", type=float, required=True, help="evaluation point")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "catalog":
            return _cmd_catalog(args)
        return _cmd_eval(args)
    except (CliError, ExpressionError, CodomainError, DomainError, VerifierError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
