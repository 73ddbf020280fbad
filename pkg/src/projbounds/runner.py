"""Scenario execution: angles, rates, traces, checks, and report emission.

Reports are plain dataclasses rendered to JSON or CSV.  Rendering is
byte-stable: identical scenario and seed produce identical files.  Wall
time is measured and kept on the in-memory report for interactive use but
is excluded from the serialized document, since a timing field would break
the byte-for-byte reproducibility the harness guarantees.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .affine import AffineSubspace, cyclic_affine, intersection_affine, simultaneous_affine
from .angles import (
    ROUTE_GRAM,
    ROUTE_NORM,
    ROUTE_PRINCIPAL,
    FriedrichsResult,
    cos_two,
    friedrichs_from_norm,
    friedrichs_gram,
)
from .errors import DegenerateError, InfeasibleError, InputError
from .methods import (
    IterationTrace,
    cyclic_operator,
    error_operator_norm,
    iterate,
    kw_bound,
    optimal_bound_simultaneous,
    simultaneous_operator,
    verify_error_identity,
)
from .numlin import DEFAULT_TOL
from .productspace import build_product, chain_residual_profile, cos_CD, pierra_lift_residual
from .scenario import CHECK_NAMES, Scenario, validate_scenario
from .subspaces import Subspace, intersection

__all__ = [
    "DEFAULT_TOLERANCES",
    "CheckOutcome",
    "TraceSummary",
    "Report",
    "run_scenario",
    "report_to_dict",
    "parse_report",
    "render_report",
    "emit_report",
    "verify_battery",
    "render_battery",
]

REPORT_SCHEMA = "projbounds-report v1"
BATTERY_SCHEMA = "projbounds-verify v1"

# Central tolerance block; echoed verbatim into every report.
DEFAULT_TOLERANCES = {
    "norm_chain": 1e-8,
    "kw": 1e-9,
    "lemma_identity": 1e-9,
    "pierra_lift": 1e-9,
    "compare": 1e-12,
    "bounds": 1e-10,
    "rank_relative_eps": DEFAULT_TOL.relative_eps,
    "rank_absolute_floor": DEFAULT_TOL.absolute_floor,
}

_LEMMA_K_CAP = 20


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    residual: float
    tolerance: float
    note: str = ""

    def __post_init__(self) -> None:
        # numpy scalars leak in from norms/comparisons; keep JSON-safe types
        self.passed = bool(self.passed)
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)


@dataclass
class TraceSummary:
    start_index: int
    start: list[float]
    errors: list[float]
    bounds: list[float]
    max_violation: float


@dataclass
class Report:
    scenario_name: str
    mode: str
    method: str
    ambient_dim: int
    r: int
    friedrichs: dict
    q: float | None
    chain_residuals: list[float] | None
    traces: list[TraceSummary]
    check_outcomes: list[CheckOutcome]
    error: dict | None
    seed: int
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    wall_time_s: float = 0.0

    def all_passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.check_outcomes)


def _friedrichs_entry(result: FriedrichsResult | None) -> dict | None:
    if result is None:
        return None
    return {"value": float(result.value), "degenerate": bool(result.degenerate)}


def _random_starts(s: Scenario) -> list[np.ndarray]:
    if s.random_starts <= 0:
        return []
    rng = np.random.default_rng(np.random.SeedSequence(s.seed))
    return [rng.standard_normal(s.ambient_dim) for _ in range(s.random_starts)]


def _trace_summary(index: int, trace: IterationTrace) -> TraceSummary:
    return TraceSummary(
        start_index=index,
        start=[float(v) for v in trace.start],
        errors=[float(v) for v in trace.errors],
        bounds=[float(v) for v in trace.bounds],
        max_violation=float(trace.max_violation()),
    )


def _product_alternating_trace(model_parts, x0: np.ndarray, k_max: int) -> IterationTrace:
    model, P_C, P_D, P_CD, c_prod = model_parts
    lifted = np.tile(x0, model.factor_count)
    target = P_CD @ lifted
    errors = np.empty(k_max + 1)
    errors[0] = np.linalg.norm(lifted - target)
    y = lifted
    for k in range(1, k_max + 1):
        y = P_D @ (P_C @ y)
        errors[k] = np.linalg.norm(y - target)
    bounds = c_prod ** (2 * np.arange(k_max + 1)) * np.linalg.norm(lifted)
    return IterationTrace(start=x0, errors=errors, bounds=bounds)


def _run_checks(s: Scenario, subs: list[Subspace], starts: list[np.ndarray],
                traces: list[TraceSummary], wanted) -> tuple[list[CheckOutcome], list[float] | None]:
    outcomes: list[CheckOutcome] = []
    chain_residuals: list[float] | None = None
    for name in wanted:
        tol = DEFAULT_TOLERANCES[name]
        if name == "norm_chain":
            try:
                profile = chain_residual_profile(subs, range(1, s.k_max + 1))
                worst = np.max(np.vstack(list(profile.values())), axis=0)
                chain_residuals = [float(v) for v in worst]
                residual = float(np.max(worst))
                note = f"max adjacent residuals over k=1..{s.k_max}"
            except DegenerateError as exc:
                chain_residuals = [0.0] * 5
                residual = 0.0
                note = f"degenerate: {exc}"
            outcomes.append(CheckOutcome(name, residual <= tol, residual, tol, note))
        elif name == "kw":
            T = cyclic_operator(subs)
            residual = max(
                abs(error_operator_norm(T, k) - kw_bound(subs[0], subs[1], k))
                for k in range(1, s.k_max + 1)
            )
            outcomes.append(
                CheckOutcome(name, residual <= tol, float(residual), tol,
                             f"alternating error norm vs cos^(2k-1), k=1..{s.k_max}")
            )
        elif name == "lemma_identity":
            cap = min(s.k_max, _LEMMA_K_CAP)
            residual = 0.0
            for op in (simultaneous_operator(subs), cyclic_operator(subs)):
                for k in range(1, cap + 1):
                    residual = max(residual, verify_error_identity(op, k))
            outcomes.append(
                CheckOutcome(name, residual <= tol, float(residual), tol,
                             f"both operator kinds, k=1..{cap}")
            )
        elif name == "pierra_lift":
            residual = pierra_lift_residual(subs, starts, range(0, s.k_max + 1))
            outcomes.append(
                CheckOutcome(name, residual <= tol, float(residual), tol,
                             f"{len(starts)} start(s), k=0..{s.k_max}")
            )
        elif name == "compare":
            gap = 0.0
            for k in range(1, s.k_max + 1):
                first, second = kw_bound(subs[0], subs[1], k), optimal_bound_simultaneous(subs, k)
                gap = max(gap, first - second)
            outcomes.append(
                CheckOutcome(name, gap <= tol, float(gap), tol,
                             "cyclic bound minus simultaneous bound (must be <= 0)")
            )
        elif name == "bounds":
            violation = max((t.max_violation for t in traces), default=0.0)
            outcomes.append(
                CheckOutcome(name, violation <= tol, float(violation), tol,
                             f"max over {len(traces)} trace(s)")
            )
    return outcomes, chain_residuals


def run_scenario(s: Scenario, include_traces: bool = True,
                 checks_override=None) -> Report:
    """Execute a scenario and assemble its report.

    ``include_traces=False`` skips iteration entirely (the ``analyze``
    subcommand); ``checks_override`` replaces the scenario's check list.
    Every requested check is executed and reported with its residual,
    passing or not.
    """
    validate_scenario(s)
    t0 = time.perf_counter()
    r = s.r

    if s.mode == "affine":
        affines = [
            AffineSubspace.from_point_span(spec.anchor, spec.spanning)
            for spec in s.subspaces
        ]
        subs = [V.direction for V in affines]
    else:
        affines = None
        subs = [Subspace.from_spanning(spec.spanning) for spec in s.subspaces]

    gram = friedrichs_gram(subs)
    try:
        norm_route = friedrichs_from_norm(subs)
    except DegenerateError:
        norm_route = None
    principal = cos_two(subs[0], subs[1]) if r == 2 else None
    friedrichs = {
        ROUTE_GRAM: _friedrichs_entry(gram),
        ROUTE_NORM: _friedrichs_entry(norm_route),
        ROUTE_PRINCIPAL: _friedrichs_entry(principal),
    }
    q = 0.0 if gram.degenerate else (r - 1.0) / r * gram.value + 1.0 / r

    report = Report(
        scenario_name=s.name,
        mode=s.mode,
        method=s.method,
        ambient_dim=s.ambient_dim,
        r=r,
        friedrichs=friedrichs,
        q=float(q),
        chain_residuals=None,
        traces=[],
        check_outcomes=[],
        error=None,
        seed=s.seed,
    )

    if s.mode == "affine":
        try:
            intersection_affine(affines)
        except InfeasibleError as exc:
            report.error = {"kind": "infeasible_intersection", "message": str(exc)}
            report.wall_time_s = time.perf_counter() - t0
            return report

    starts = list(s.starts) + _random_starts(s)

    if include_traces and starts:
        if s.mode == "affine":
            runner = simultaneous_affine if s.method == "simultaneous" else cyclic_affine
            traces = [runner(affines, x0, s.k_max) for x0 in starts]
        elif s.method == "product_alternating":
            model = build_product(subs)
            parts = (
                model,
                model.C.projector(),
                model.D.projector(),
                intersection([model.C, model.D]).projector(),
                cos_CD(model),
            )
            traces = [_product_alternating_trace(parts, x0, s.k_max) for x0 in starts]
        else:
            op = simultaneous_operator(subs) if s.method == "simultaneous" else cyclic_operator(subs)
            traces = [iterate(op, x0, s.k_max) for x0 in starts]
        report.traces = [_trace_summary(i, t) for i, t in enumerate(traces)]

    wanted = tuple(checks_override) if checks_override is not None else s.checks
    for name in wanted:
        if name not in CHECK_NAMES:
            raise InputError(f"unknown check {name!r}")
    outcomes, chain_residuals = _run_checks(s, subs, starts, report.traces, wanted)
    report.check_outcomes = outcomes
    report.chain_residuals = chain_residuals
    report.wall_time_s = time.perf_counter() - t0
    return report


def report_to_dict(rep: Report) -> dict:
    """Canonical JSON-ready form of a report (wall time excluded)."""
    return {
        "schema": REPORT_SCHEMA,
        "scenario_name": rep.scenario_name,
        "mode": rep.mode,
        "method": rep.method,
        "ambient_dim": rep.ambient_dim,
        "r": rep.r,
        "friedrichs": rep.friedrichs,
        "q": rep.q,
        "chain_residuals": rep.chain_residuals,
        "traces": [
            {
                "start_index": t.start_index,
                "start": t.start,
                "errors": t.errors,
                "bounds": t.bounds,
                "max_violation": t.max_violation,
            }
            for t in rep.traces
        ],
        "check_outcomes": [
            {
                "check": c.name,
                "passed": c.passed,
                "residual": c.residual,
                "tolerance": c.tolerance,
                "note": c.note,
            }
            for c in rep.check_outcomes
        ],
        "error": rep.error,
        "metadata": {"seed": rep.seed, "tolerances": rep.tolerances},
    }


def parse_report(text: str) -> Report:
    """Rebuild a Report from its JSON rendering."""
    doc = json.loads(text)
    if doc.get("schema") != REPORT_SCHEMA:
        raise InputError(f"unexpected report schema {doc.get('schema')!r}")
    return Report(
        scenario_name=doc["scenario_name"],
        mode=doc["mode"],
        method=doc["method"],
        ambient_dim=doc["ambient_dim"],
        r=doc["r"],
        friedrichs=doc["friedrichs"],
        q=doc["q"],
        chain_residuals=doc["chain_residuals"],
        traces=[
            TraceSummary(
                start_index=t["start_index"],
                start=t["start"],
                errors=t["errors"],
                bounds=t["bounds"],
                max_violation=t["max_violation"],
            )
            for t in doc["traces"]
        ],
        check_outcomes=[
            CheckOutcome(
                name=c["check"],
                passed=c["passed"],
                residual=c["residual"],
                tolerance=c["tolerance"],
                note=c["note"],
            )
            for c in doc["check_outcomes"]
        ],
        error=doc["error"],
        seed=doc["metadata"]["seed"],
        tolerances=doc["metadata"]["tolerances"],
    )


def _csv_lines(rep: Report) -> list[str]:
    lines = ["scenario,start_index,k,error,bound,ratio"]
    for t in rep.traces:
        for k, (err, bnd) in enumerate(zip(t.errors, t.bounds)):
            ratio = "" if bnd == 0.0 else repr(err / bnd)
            lines.append(f"{rep.scenario_name},{t.start_index},{k},{err!r},{bnd!r},{ratio}")
    return lines


def render_report(rep: Report, fmt: str = "json") -> str:
    """Render to the requested format; output is byte-stable."""
    if fmt == "json":
        return json.dumps(report_to_dict(rep), indent=2) + "\n"
    if fmt == "csv":
        return "\n".join(_csv_lines(rep)) + "\n"
    raise InputError(f"unknown format {fmt!r}; expected json or csv")


def emit_report(rep: Report, fmt: str, path) -> None:
    """Write the rendered report to ``path`` with LF newlines."""
    text = render_report(rep, fmt)
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


def _battery_scenario(index: int, child: np.random.SeedSequence, kmax_cap: int) -> Scenario:
    from .scenario import SubspaceSpec

    rng = np.random.default_rng(child)
    r = int(rng.integers(2, 6))
    n = int(rng.integers(4, 31))
    dims = [int(rng.integers(1, n)) for _ in range(r)]
    k_max = int(rng.integers(1, kmax_cap + 1))
    specs = [SubspaceSpec(spanning=rng.standard_normal((n, d))) for d in dims]
    method = ("simultaneous", "cyclic", "product_alternating")[index % 3]
    checks = ["norm_chain", "lemma_identity", "pierra_lift", "bounds"]
    if r == 2:
        checks += ["kw", "compare"]
    return Scenario(
        name=f"battery-{index:03d}",
        ambient_dim=n,
        subspaces=specs,
        method=method,
        k_max=k_max,
        seed=int(rng.integers(0, 2**31)),
        random_starts=2,
        checks=tuple(checks),
    )


def verify_battery(seed: int, count: int = 100, kmax_cap: int = 10) -> dict:
    """Run the full identity suite over seeded random instances.

    Returns the aggregate verification document (JSON-ready).  Determinism:
    all randomness descends from ``seed`` through spawned seed sequences, so
    repeated runs produce identical documents.
    """
    if count < 1:
        raise InputError("count must be at least 1")
    root = np.random.SeedSequence(seed)
    instances = []
    failures = 0
    for index, child in enumerate(root.spawn(count)):
        sc = _battery_scenario(index, child, kmax_cap)
        rep = run_scenario(sc)
        passed = rep.all_passed()
        if not passed:
            failures += 1
        instances.append(
            {
                "name": sc.name,
                "r": sc.r,
                "ambient_dim": sc.ambient_dim,
                "method": sc.method,
                "k_max": sc.k_max,
                "passed": passed,
                "checks": [
                    {
                        "check": c.name,
                        "passed": c.passed,
                        "residual": c.residual,
                        "tolerance": c.tolerance,
                    }
                    for c in rep.check_outcomes
                ],
            }
        )
    return {
        "schema": BATTERY_SCHEMA,
        "seed": seed,
        "count": count,
        "kmax_cap": kmax_cap,
        "failures": failures,
        "passed": failures == 0,
        "instances": instances,
        "tolerances": dict(DEFAULT_TOLERANCES),
    }


def render_battery(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"
