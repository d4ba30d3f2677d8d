"""Adversary constructions: streams that force any generator of a given
shape into a verifiable failure, plus the report type those failures are
returned as.

Three families:

  gc_witness_adversary  - plays a verified dimension witness tuple and
                          classifies the generator's response
  geometric_adversary   - enumerates the naturals against geometric blocks,
                          checking at each block boundary
  query_adversary       - answers membership queries adaptively so that
                          query-based generators stay wrong forever

Every report is re-checkable from its own fields; verify_report does so
without consulting the adversary's internal state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .dimension import check_witness
from .errors import ConfigError, InvariantViolation
from .groups import BlockPartition, FiniteGroups, GroupCollection
from .hypotheses import Hypothesis, HypothesisClass
from .measures import (ONE, ZERO, RationalDist, group_empirical,
                       induced_group_probs, sup_distance)
from .periodic import ALL, PeriodicSet, from_finite

INCONSISTENT = "inconsistent"
UNREPRESENTATIVE = "unrepresentative"
BUDGET_EXCEEDED = "query_budget_exceeded"


@dataclass(frozen=True)
class ViolationReport:
    step: int
    kind: str
    history: tuple[int, ...]
    distribution: RationalDist | None
    alpha: Fraction | None = None
    element: int | None = None       # offending support element
    reason: str | None = None        # "already-seen" | "out-of-support"
    hypothesis: str | None = None    # id witnessing out-of-support
    continuation: tuple[int, ...] = ()
    group: int | None = None         # group attaining the distance
    distance: Fraction | None = None
    pi_hat: Fraction | None = None   # empirical weight of that group
    checkpoint: int | None = None    # geometric block index


def verify_report(report: ViolationReport,
                  groups: GroupCollection | None = None,
                  support: PeriodicSet | None = None) -> bool:
    """Recheck a report from its own fields.  Inconsistency needs the target
    support (for out-of-support claims); unrepresentativeness needs the group
    collection the distance was measured against."""
    if report.kind == BUDGET_EXCEEDED:
        return report.distribution is None
    if report.distribution is None:
        return False
    if report.kind == INCONSISTENT:
        if report.element is None or report.element not in report.distribution.support():
            return False
        if report.reason == "already-seen":
            return report.element in report.history
        if report.reason == "out-of-support":
            return support is not None and report.element not in support
        return False
    if report.kind == UNREPRESENTATIVE:
        if groups is None or report.distance is None or report.alpha is None:
            return False
        lam = induced_group_probs(report.distribution, groups)
        pihat = group_empirical(report.history, groups)
        return (sup_distance(lam, pihat) == report.distance
                and report.distance > report.alpha)
    return False


# -- dimension-witness adversary ------------------------------------------------

def gc_witness_adversary(make_session: Callable[[], object],
                         cls: HypothesisClass, c: FiniteGroups,
                         alpha: Fraction,
                         witness: Sequence[int]) -> ViolationReport:
    """Feed a verified witness tuple to a fresh generator session and
    classify the step-t output: mass on a seen element, mass outside the
    closure (some consistent hypothesis excludes it), or supported entirely
    inside the remaining closure, in which case the exhausted groups force
    the group distance above alpha.
    """
    cond = check_witness(cls, c, alpha, witness)
    if cond is None:
        raise ConfigError(f"tuple {tuple(witness)} is not a dimension witness "
                          f"for this instance at alpha={alpha}")
    session = make_session()
    mu = None
    for x in witness:
        mu = session.step(x)
    assert mu is not None
    t = len(witness)
    hist = tuple(witness)
    closure = cls.closure(witness)
    assert closure is not None  # witness verification guarantees this
    allowed = closure - from_finite(witness)
    offenders = sorted(x for x in mu.support() if x not in allowed)
    if offenders:
        x = offenders[0]
        consistent = cls.consistent_indices(witness)
        if x in hist:
            h = cls.get(consistent[0])
            reason = "already-seen"
        else:
            # x lies outside the closure, so some consistent support misses it
            h = next(cls.get(i) for i in consistent
                     if x not in cls.get(i).support)
            reason = "out-of-support"
        cont = tuple(y for y in _preview(h.support, hist, 3))
        return ViolationReport(step=t, kind=INCONSISTENT, history=hist,
                               distribution=mu, alpha=alpha, element=x,
                               reason=reason, hypothesis=h.id,
                               continuation=cont)
    lam = induced_group_probs(mu, c)
    pihat = group_empirical(hist, c)
    d = sup_distance(lam, pihat)
    if d <= alpha:
        raise InvariantViolation(
            "verified witness did not force the distance above alpha",
            snapshot={"witness": hist, "mu": mu.serialize(), "distance": str(d)})
    keys = sorted(set(lam) | set(pihat))
    gstar = next(i for i in keys
                 if abs(lam.get(i, ZERO) - pihat.get(i, ZERO)) == d)
    return ViolationReport(step=t, kind=UNREPRESENTATIVE, history=hist,
                           distribution=mu, alpha=alpha, group=gstar,
                           distance=d, pi_hat=pihat.get(gstar, ZERO))


def _preview(s: PeriodicSet, seen: Sequence[int], k: int) -> list[int]:
    out = []
    excl = set(seen)
    for j in range(k):
        nxt = s.nth_unseen(excl, j)
        if nxt is None:
            break
        out.append(nxt)
    return out


# -- geometric adversary ----------------------------------------------------------

def geometric_checkpoints(base: int, depth: int) -> dict[int, int]:
    """Map step t -> block index for the first `depth` block-completion
    moments of the natural enumeration against blocks of sizes
    base, base^2, base^3, ...  Block i is complete once the stream has shown
    every element below base + base^2 + ... + base^i, and at that step its
    empirical weight strictly exceeds 1 - 1/base."""
    steps: dict[int, int] = {}
    total = 0
    for i in range(1, depth + 1):
        total += base ** i
        steps[total] = i
    return steps


def geometric_adversary(make_session: Callable[[HypothesisClass, BlockPartition, Fraction], object],
                        alpha: Fraction, depth: int) -> list[ViolationReport]:
    """Run a generator against the single-hypothesis instance (support = all
    naturals) with geometric blocks of sizes b, b^2, b^3, ... where
    b = 1/(1-alpha) must be an integer >= 2.  The stream enumerates the
    naturals in order; at the moment block i is fully shown, its empirical
    weight strictly exceeds alpha while the block holds no unseen element,
    so the emitted distribution is either inconsistent (mass on a seen
    element) or off by more than alpha on that block.  Returns one verified
    report per checkpoint up to the requested depth.
    """
    if not isinstance(alpha, Fraction):
        alpha = Fraction(alpha)
    if alpha <= 0 or alpha >= 1:
        raise ConfigError(f"geometric adversary needs 0 < alpha < 1, got {alpha}")
    b_frac = 1 / (1 - alpha)
    if b_frac.denominator != 1 or b_frac < 2:
        raise ConfigError(
            f"geometric adversary needs 1/(1-alpha) to be an integer >= 2, "
            f"got {b_frac} (alpha={alpha})")
    b = int(b_frac)
    if depth < 1:
        raise ConfigError(f"depth must be >= 1, got {depth}")

    groups = BlockPartition(base=b, prefix_sizes=(b,))
    cls = HypothesisClass([Hypothesis("everything", ALL)])
    session = make_session(cls, groups, alpha)

    checkpoints = geometric_checkpoints(b, depth)
    horizon = max(checkpoints)

    reports: list[ViolationReport] = []
    history: list[int] = []
    for t in range(1, horizon + 1):
        x = t - 1
        history.append(x)
        mu = session.step(x)
        i = checkpoints.get(t)
        if i is None:
            continue
        lo, hi = groups.block_range(i)
        if hi > t:
            raise InvariantViolation("checkpoint arithmetic is off",
                                     snapshot={"t": t, "block": i, "range": (lo, hi)})
        pihat_i = Fraction(hi - lo, t)
        if pihat_i <= alpha:
            raise InvariantViolation(
                "full block weight failed to exceed alpha",
                snapshot={"t": t, "block": i, "pi_hat": str(pihat_i)})
        hist = tuple(history)
        seen_mass = sorted(y for y in mu.support() if y < t)
        if seen_mass:
            reports.append(ViolationReport(
                step=t, kind=INCONSISTENT, history=hist, distribution=mu,
                alpha=alpha, element=seen_mass[0], reason="already-seen",
                checkpoint=i, pi_hat=pihat_i))
            continue
        lam = induced_group_probs(mu, groups)
        pihat = group_empirical(history, groups)
        d = sup_distance(lam, pihat)
        if d <= alpha:
            raise InvariantViolation(
                "exhausted block did not force the distance above alpha",
                snapshot={"t": t, "block": i, "mu": mu.serialize()})
        reports.append(ViolationReport(
            step=t, kind=UNREPRESENTATIVE, history=hist, distribution=mu,
            alpha=alpha, group=i, distance=d, pi_hat=pihat_i, checkpoint=i))
    return reports


# -- query adversary ----------------------------------------------------------------

class QueryBudgetExceeded(Exception):
    def __init__(self, step: int, budget: int):
        super().__init__(f"query budget {budget} exceeded at step {step}")
        self.step = step
        self.budget = budget


class MembershipOracle:
    """Adaptive membership oracle handed to query-based generators.

    hyp_member(x) answers whether x is in the target hypothesis's support;
    group_member(x) answers whether x is in group one of the adversary's
    two-group partition.  Both answers are decided lazily so that fresh
    hypothesis-side queries come back positive but land in group two, and
    fresh group-side queries land in group two with a positive hypothesis
    assignment; either way the element is queued for later enumeration.
    """

    def __init__(self, state: "QueryAdversaryState", budget: int):
        self._state = state
        self._budget = budget
        self._spent = 0

    def _charge(self):
        self._spent += 1
        if self._spent > self._budget:
            raise QueryBudgetExceeded(self._state.step, self._budget)

    def hyp_member(self, x: int) -> bool:
        self._charge()
        st = self._state
        if st.hyp.get(x, -1) == -1:
            st.hyp[x] = 1
            st.grp[x] = 2
            st.queue.append(x)
        return st.hyp[x] == 1

    def group_member(self, x: int) -> bool:
        self._charge()
        st = self._state
        if st.grp.get(x, -1) == -1:
            st.grp[x] = 2
            st.hyp[x] = 1
            st.queue.append(x)
        return st.grp[x] == 1


@dataclass
class QueryAdversaryState:
    hyp: dict[int, int] = field(default_factory=dict)    # -1/0/1, absent = -1
    grp: dict[int, int] = field(default_factory=dict)    # -1/1/2, absent = -1
    enumeration: list[int] = field(default_factory=list)
    queue: deque = field(default_factory=deque)
    step: int = 0
    _fresh_scan: int = 0

    def next_fresh(self) -> int:
        x = self._fresh_scan
        while self.grp.get(x, -1) != -1 or self.hyp.get(x, -1) != -1:
            x += 1
        self._fresh_scan = x
        return x

    def group_one_fraction(self) -> Fraction:
        t = len(self.enumeration)
        ones = sum(1 for y in self.enumeration if self.grp.get(y) == 1)
        return Fraction(ones, t)


def query_adversary(generator, steps: int,
                    query_budget: int = 10 ** 6
                    ) -> tuple[list[ViolationReport], QueryAdversaryState]:
    """Drive a query-based generator for `steps` rounds.

    Each round the adversary extends its enumeration (odd rounds and empty
    queues get a fresh element placed in group one; otherwise a previously
    queried element is replayed from the queue), lets the generator emit a
    distribution with oracle access, then classifies the output.  Mass on a
    declared-out or already-enumerated element is inconsistent; mass on a
    never-queried element is declared out on the spot (inconsistent); and a
    distribution confined to queried elements lives entirely in group two,
    whose enumeration weight never reaches half, so the distance is at least
    one half > any alpha below it.  Generators must expose
    emit(prefix, oracle) -> RationalDist.
    """
    if steps < 1:
        raise ConfigError(f"steps must be >= 1, got {steps}")
    st = QueryAdversaryState()
    reports: list[ViolationReport] = []
    for t in range(1, steps + 1):
        st.step = t
        if t % 2 == 1 or not st.queue:
            x = st.next_fresh()
            st.grp[x] = 1
            st.hyp[x] = 1
        else:
            x = st.queue.popleft()
        st.enumeration.append(x)
        oracle = MembershipOracle(st, query_budget)
        try:
            mu = generator.emit(tuple(st.enumeration), oracle)
        except QueryBudgetExceeded:
            reports.append(ViolationReport(
                step=t, kind=BUDGET_EXCEEDED, history=tuple(st.enumeration),
                distribution=None))
            return reports, st
        if not isinstance(mu, RationalDist):
            raise ConfigError(
                f"query generator returned {type(mu).__name__}, expected RationalDist")
        hist = tuple(st.enumeration)
        seen = set(hist)
        bad = sorted(y for y in mu.support()
                     if st.hyp.get(y, -1) == 0 or y in seen)
        if bad:
            y = bad[0]
            reason = "already-seen" if y in seen else "out-of-support"
            reports.append(ViolationReport(
                step=t, kind=INCONSISTENT, history=hist, distribution=mu,
                element=y, reason=reason))
            continue
        fresh = sorted(y for y in mu.support() if st.hyp.get(y, -1) == -1)
        if fresh:
            y = fresh[0]
            st.hyp[y] = 0
            st.grp[y] = 2
            reports.append(ViolationReport(
                step=t, kind=INCONSISTENT, history=hist, distribution=mu,
                element=y, reason="out-of-support"))
            continue
        # remaining support: hyp == 1 and never enumerated -> grp == 2
        pihat1 = st.group_one_fraction()
        if 2 * pihat1 < 1:
            raise InvariantViolation(
                "group-one enumeration weight dropped below a half",
                snapshot={"t": t, "fraction": str(pihat1)})
        lam = {1: ZERO, 2: ONE}
        pihat = {1: pihat1, 2: 1 - pihat1}
        d = sup_distance(lam, pihat)
        reports.append(ViolationReport(
            step=t, kind=UNREPRESENTATIVE, history=hist, distribution=mu,
            group=1, distance=d, pi_hat=pihat1))
    return reports, st


# -- baseline generators for the adversaries ----------------------------------------

class ConstantSession:
    """Step-based session that ignores its input and always plays one fixed
    element as a point mass."""

    def __init__(self, element: int):
        self.element = element
        self.history: list[int] = []
        self.last_selected = None

    def step(self, x: int) -> RationalDist:
        self.history.append(x)
        return RationalDist.point(self.element)


class QueryThenEmit:
    """Scans the naturals for the first element that is unseen and confirmed
    in-support, then plays it as a point mass."""

    def emit(self, prefix: tuple[int, ...], oracle: MembershipOracle) -> RationalDist:
        seen = set(prefix)
        x = 0
        while True:
            if x not in seen and oracle.hyp_member(x):
                return RationalDist.point(x)
            x += 1


class ConstantQueryFree:
    """Ignores the oracle entirely and always plays one fixed element."""

    def __init__(self, element: int):
        self.element = element

    def emit(self, prefix: tuple[int, ...], oracle: MembershipOracle) -> RationalDist:
        return RationalDist.point(self.element)


class GreedyQuerier:
    """Queries every natural up to a huge bound before emitting; exists to
    trip the per-step query budget."""

    def emit(self, prefix: tuple[int, ...], oracle: MembershipOracle) -> RationalDist:
        x = 0
        while True:
            oracle.hyp_member(x)
            x += 1
