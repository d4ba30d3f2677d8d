"""Game runner and trace format.

run_game drives a generator session along a scenario's stream and verifies
every emitted distribution with the measure-level checkers only; none of the
verification reuses the generator constructions, so a broken generator
cannot vouch for itself.  Traces serialize to JSON lines with sorted keys
and fixed separators, making reruns byte-comparable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import InvariantViolation
from .measures import (RationalDist, format_fraction, is_alpha_representative,
                       parse_fraction)
from .scenario import Scenario, build_session, materialize_stream


@dataclass(frozen=True)
class StepRecord:
    t: int
    x: int
    distinct: int
    mu: RationalDist
    distance: Fraction
    representative: bool
    consistent: bool
    closure_bot: bool
    selected: int | None = None


@dataclass
class GameTrace:
    scenario_name: str
    generator_kind: str
    alpha: Fraction
    horizon: int
    steps: list[StepRecord] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def run_game(scenario: Scenario) -> GameTrace:
    xs = materialize_stream(scenario)
    session = build_session(scenario)
    history: list[int] = []
    seen: set[int] = set()
    steps: list[StepRecord] = []
    for t, x in enumerate(xs, 1):
        mu = session.step(x)
        if not isinstance(mu, RationalDist):
            raise InvariantViolation(
                f"step {t}: generator returned {type(mu).__name__} "
                "instead of a distribution")
        history.append(x)
        seen.add(x)
        ok, dist = is_alpha_representative(mu, history, scenario.groups,
                                           scenario.alpha)
        consistent = all(y in scenario.target.support and y not in seen
                         for y in mu.support())
        closure = scenario.cls.closure(history)
        steps.append(StepRecord(
            t=t, x=x, distinct=len(seen), mu=mu, distance=dist,
            representative=ok, consistent=consistent,
            closure_bot=closure is None,
            selected=session.last_selected if scenario.kind == "inlimit" else None))
    trace = GameTrace(scenario_name=scenario.name, generator_kind=scenario.kind,
                      alpha=scenario.alpha, horizon=scenario.horizon,
                      steps=steps)
    trace.summary = _summarize(trace)
    return trace


def _summarize(trace: GameTrace) -> dict:
    steps = trace.steps
    first_consistent_from = None
    for rec in reversed(steps):
        if rec.consistent:
            first_consistent_from = rec.t
        else:
            break
    violations = [{"distance": format_fraction(rec.distance), "t": rec.t}
                  for rec in steps if not rec.representative]
    max_distance = max((rec.distance for rec in steps), default=Fraction(0))
    return {
        "steps": len(steps),
        "all_representative": all(rec.representative for rec in steps),
        "max_distance": format_fraction(max_distance),
        "first_consistent_from": first_consistent_from,
        "violations": violations,
    }


def evaluate_asserts(scenario: Scenario, trace: GameTrace) -> list[str]:
    """Check the scenario's declared assertions against a finished trace;
    returns human-readable failure strings (empty means all hold)."""
    failures = []
    asserts = scenario.asserts
    if asserts.get("all_representative"):
        for rec in trace.steps:
            if not rec.representative:
                failures.append(
                    f"asserts.all_representative: step {rec.t} has distance "
                    f"{format_fraction(rec.distance)} > "
                    f"{format_fraction(scenario.alpha)}")
                break
    if "representative_from" in asserts:
        n = asserts["representative_from"]
        for rec in trace.steps:
            if rec.t >= n and not rec.representative:
                failures.append(
                    f"asserts.representative_from: step {rec.t} has distance "
                    f"{format_fraction(rec.distance)} > "
                    f"{format_fraction(scenario.alpha)}")
                break
    if "consistent_from" in asserts:
        n = asserts["consistent_from"]
        for rec in trace.steps:
            if rec.t >= n and not rec.consistent:
                failures.append(
                    f"asserts.consistent_from: step {rec.t} emits mass on a "
                    "seen or out-of-support element")
                break
    return failures


# -- serialization ------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def trace_lines(trace: GameTrace) -> list[str]:
    lines = [_dump({
        "kind": "header",
        "scenario": trace.scenario_name,
        "generator": trace.generator_kind,
        "alpha": format_fraction(trace.alpha),
        "horizon": trace.horizon,
    })]
    for rec in trace.steps:
        lines.append(_dump({
            "kind": "step",
            "t": rec.t,
            "x": rec.x,
            "distinct": rec.distinct,
            "mu": rec.mu.serialize(),
            "distance": format_fraction(rec.distance),
            "representative": rec.representative,
            "consistent": rec.consistent,
            "closure": "bot" if rec.closure_bot else "ok",
            "selected": rec.selected,
        }))
    lines.append(_dump({"kind": "summary", **trace.summary}))
    return lines


def emit_trace(trace: GameTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        for line in trace_lines(trace):
            fp.write(line + "\n")


def parse_trace(text: str | Iterable[str]) -> GameTrace:
    if isinstance(text, str):
        raw_lines = text.splitlines()
    else:
        raw_lines = [ln.rstrip("\n") for ln in text]
    rows = [json.loads(ln) for ln in raw_lines if ln.strip()]
    if not rows or rows[0].get("kind") != "header":
        raise ValueError("trace must start with a header line")
    if rows[-1].get("kind") != "summary":
        raise ValueError("trace must end with a summary line")
    head = rows[0]
    trace = GameTrace(scenario_name=head["scenario"],
                      generator_kind=head["generator"],
                      alpha=parse_fraction(head["alpha"]),
                      horizon=head["horizon"])
    for row in rows[1:-1]:
        if row.get("kind") != "step":
            raise ValueError(f"unexpected line kind {row.get('kind')!r}")
        mu = RationalDist({int(x): parse_fraction(m) for x, m in row["mu"]})
        trace.steps.append(StepRecord(
            t=row["t"], x=row["x"], distinct=row["distinct"], mu=mu,
            distance=parse_fraction(row["distance"]),
            representative=row["representative"],
            consistent=row["consistent"],
            closure_bot=row["closure"] == "bot",
            selected=row["selected"]))
    summary = dict(rows[-1])
    summary.pop("kind")
    trace.summary = summary
    return trace
