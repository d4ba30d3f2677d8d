"""Command-line front end.

Subcommands:

  run        - play a scenario end to end, optionally writing a trace file
  gc-dim     - dimension search for a scenario's instance
  closure    - intersection of consistent supports for a given prefix
  feasible   - exact feasibility verdict for one hypothesis and prefix
  adversary  - run one of the adversary constructions against a baseline

Exit codes: 0 all requested properties hold, 2 a declared assertion failed
(details on stdout), 3 configuration or usage error (details on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import adversaries
from .adversaries import (ConstantQueryFree, ConstantSession, GreedyQuerier,
                          QueryThenEmit, ViolationReport, gc_witness_adversary,
                          geometric_adversary, query_adversary)
from .dimension import GcSearch, gc_dimension
from .errors import ConfigError, ScenarioError
from .generators import GeneratorSession, is_feasible
from .harness import emit_trace, evaluate_asserts, run_game, trace_lines
from .measures import format_fraction, parse_fraction
from .periodic import format_set
from .scenario import load_scenario


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _parse_prefix(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of naturals, got {text!r}")


def _report_row(r: ViolationReport) -> dict:
    row: dict = {"step": r.step, "kind": r.kind}
    if r.distribution is not None:
        row["mu"] = r.distribution.serialize()
    if r.element is not None:
        row["element"] = r.element
    if r.reason is not None:
        row["reason"] = r.reason
    if r.hypothesis is not None:
        row["hypothesis"] = r.hypothesis
    if r.continuation:
        row["continuation"] = list(r.continuation)
    if r.group is not None:
        row["group"] = r.group
    if r.distance is not None:
        row["distance"] = format_fraction(r.distance)
    if r.pi_hat is not None:
        row["pi_hat"] = format_fraction(r.pi_hat)
    if r.checkpoint is not None:
        row["checkpoint"] = r.checkpoint
    if r.alpha is not None:
        row["alpha"] = format_fraction(r.alpha)
    return row


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    trace = run_game(scenario)
    if args.trace:
        emit_trace(trace, args.trace)
    if args.print_trace:
        for line in trace_lines(trace):
            print(line)
    else:
        print(_dump({"scenario": trace.scenario_name, **trace.summary}))
    failures = evaluate_asserts(scenario, trace)
    for f in failures:
        print(f"FAIL {f}")
    return 2 if failures else 0


def cmd_gc_dim(args) -> int:
    scenario = load_scenario(args.scenario)
    search = scenario.gc_search
    if args.max_d is not None or args.horizon is not None:
        search = GcSearch(max_d=args.max_d or search.max_d,
                          horizon=args.horizon or search.horizon)
    result = gc_dimension(scenario.cls, scenario.groups, scenario.alpha, search)
    row = {"status": result.status, "d": result.d,
           "witness": list(result.witness) if result.witness else None,
           "condition": str(result.condition) if result.condition else None,
           "pool_sufficient": result.pool_sufficient}
    print(_dump(row))
    return 0


def cmd_closure(args) -> int:
    scenario = load_scenario(args.scenario)
    prefix = _parse_prefix(args.prefix)
    closure = scenario.cls.closure(prefix)
    print("bot" if closure is None else format_set(closure))
    return 0


def cmd_feasible(args) -> int:
    scenario = load_scenario(args.scenario)
    prefix = _parse_prefix(args.prefix)
    hid = args.hypothesis or scenario.target_id
    try:
        _, h = scenario.cls.by_id(hid)
    except KeyError:
        raise ConfigError(f"unknown hypothesis id {hid!r}")
    witness = is_feasible(h, scenario.groups, prefix, scenario.alpha)
    if witness is None:
        print(_dump({"feasible": False, "hypothesis": hid}))
    else:
        entries = [{"cell": list(e.cell) if isinstance(e.cell, tuple) else e.cell,
                    "element": e.element, "mass": format_fraction(e.mass)}
                   for e in witness.entries]
        print(_dump({"feasible": True, "hypothesis": hid, "witness": entries}))
    return 0


def _baseline_session_factory(name: str, element: int | None):
    def build(cls, groups, alpha):
        if name == "empirical":
            return GeneratorSession("empirical", cls, groups, alpha)
        if name == "inlimit":
            return GeneratorSession("inlimit", cls, groups, alpha)
        if name == "uniform-low":
            return GeneratorSession("uniform", cls, groups, alpha, d_star=1)
        if name == "constant":
            if element is None:
                raise ConfigError("--element is required for the constant baseline")
            return ConstantSession(element)
        raise ConfigError(f"unknown baseline {name!r}")
    return build


def cmd_adversary(args) -> int:
    if args.family == "geometric":
        alpha = parse_fraction(args.alpha)
        build = _baseline_session_factory(args.generator, args.element)
        reports = geometric_adversary(build, alpha, args.depth)
        for r in reports:
            print(_dump(_report_row(r)))
        print(_dump({"kind": "summary", "reports": len(reports),
                     "checkpoints": args.depth}))
        return 0
    if args.family == "query":
        if args.generator == "query-then-emit":
            gen = QueryThenEmit()
        elif args.generator == "constant":
            if args.element is None:
                raise ConfigError("--element is required for the constant baseline")
            gen = ConstantQueryFree(args.element)
        elif args.generator == "greedy":
            gen = GreedyQuerier()
        else:
            raise ConfigError(f"unknown query baseline {args.generator!r}")
        reports, state = query_adversary(gen, args.steps,
                                         query_budget=args.budget)
        for r in reports:
            print(_dump(_report_row(r)))
        print(_dump({"kind": "summary", "reports": len(reports),
                     "final_group_one_fraction":
                         format_fraction(state.group_one_fraction())}))
        return 0
    # gc-witness
    scenario = load_scenario(args.scenario)
    result = gc_dimension(scenario.cls, scenario.groups, scenario.alpha,
                          scenario.gc_search)
    if result.witness is None:
        raise ConfigError("no dimension witness found for this scenario; "
                          "raise gc_search.max_d")
    build = _baseline_session_factory(args.generator, args.element)
    make = lambda: build(scenario.cls, scenario.groups, scenario.alpha)
    report = gc_witness_adversary(make, scenario.cls, scenario.groups,
                                  scenario.alpha, result.witness)
    print(_dump(_report_row(report)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="repgen",
        description="deterministic generation games over ultimately periodic sets")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="play a scenario end to end")
    run.add_argument("scenario")
    run.add_argument("--trace", help="write the JSON-lines trace to this path")
    run.add_argument("--print-trace", action="store_true",
                     help="print the full trace instead of the summary")
    run.add_argument("--assert", dest="check_asserts", action="store_true",
                     help="evaluate the scenario's declared assertions "
                          "(always on; flag kept for explicit invocations)")
    run.set_defaults(fn=cmd_run)

    gc = sub.add_parser("gc-dim", help="dimension search for a scenario's instance")
    gc.add_argument("scenario")
    gc.add_argument("--max-d", type=int, default=None)
    gc.add_argument("--horizon", type=int, default=None)
    gc.set_defaults(fn=cmd_gc_dim)

    cl = sub.add_parser("closure", help="intersection of consistent supports")
    cl.add_argument("scenario")
    cl.add_argument("--prefix", required=True,
                    help="comma-separated example prefix, e.g. 0,2,4")
    cl.set_defaults(fn=cmd_closure)

    fe = sub.add_parser("feasible", help="exact feasibility verdict")
    fe.add_argument("scenario")
    fe.add_argument("--prefix", required=True)
    fe.add_argument("--hypothesis", default=None,
                    help="hypothesis id (default: the scenario target)")
    fe.set_defaults(fn=cmd_feasible)

    ad = sub.add_parser("adversary", help="run an adversary construction")
    ad.add_argument("family", choices=["geometric", "query", "gc-witness"])
    ad.add_argument("scenario", nargs="?",
                    help="scenario path (gc-witness only)")
    ad.add_argument("--alpha", default="1/2", help="geometric only, e.g. 1/2")
    ad.add_argument("--depth", type=int, default=4,
                    help="geometric checkpoints to drive")
    ad.add_argument("--steps", type=int, default=20, help="query rounds")
    ad.add_argument("--budget", type=int, default=10 ** 6,
                    help="per-step query budget")
    ad.add_argument("--generator", default="empirical",
                    help="baseline: empirical, inlimit, uniform-low, constant, "
                         "query-then-emit, greedy")
    ad.add_argument("--element", type=int, default=None,
                    help="fixed element for the constant baselines")
    ad.set_defaults(fn=cmd_adversary)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "adversary":
        if args.family == "gc-witness" and not args.scenario:
            print("error: gc-witness needs a scenario path", file=sys.stderr)
            return 3
    try:
        return args.fn(args)
    except (ScenarioError, ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
