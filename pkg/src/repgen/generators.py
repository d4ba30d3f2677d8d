"""Generator constructions and the exact feasibility decision.

Four generator kinds share one session interface:

  empirical   - uniform over the distinct examples seen so far (baseline)
  uniform     - tracks group empirical weights with unseen closure elements,
                redistributing the weight of exhausted groups within an
                alpha cap once d_star distinct examples have been observed
  nonuniform  - per-step delegation to the uniform construction of the
                deepest class prefix whose threshold is met
  inlimit     - plays the feasibility witness of the largest-index critical
                hypothesis, falling back to the empirical distribution

Everything is deterministic and exact: same configuration and history, same
distribution, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import simplex
from .dimension import GcSearch, gc_dimension
from .errors import ConfigError
from .groups import (BlockPartition, FiniteGroups, GroupCollection,
                     finite_support_size)
from .hypotheses import Hypothesis, HypothesisClass
from .measures import ONE, ZERO, RationalDist, empirical, group_empirical
from .periodic import PeriodicSet

KINDS = ("empirical", "uniform", "nonuniform", "inlimit")


# -- feasibility -------------------------------------------------------------

@dataclass(frozen=True)
class FeasibilityEntry:
    cell: tuple[int, ...] | int  # membership vector, or block index
    element: int
    mass: Fraction


@dataclass(frozen=True)
class FeasibilityWitness:
    entries: tuple[FeasibilityEntry, ...]

    def distribution(self) -> RationalDist:
        masses: dict[int, Fraction] = {}
        for e in self.entries:
            masses[e.element] = masses.get(e.element, ZERO) + e.mass
        return RationalDist(masses)


def is_feasible(h: Hypothesis, c: GroupCollection, history: Sequence[int],
                alpha: Fraction) -> FeasibilityWitness | None:
    """Whether some distribution over the unseen support of h tracks the
    history's group empirical weights to within alpha; returns a concrete
    witness (mass per cell, concentrated on the smallest unseen element of
    each cell) or None.

    The boundary is non-strict: achievable distance exactly alpha counts as
    feasible.
    """
    if not history:
        raise ValueError("feasibility needs a nonempty history")
    seen = set(history)
    pihat = group_empirical(history, c)

    if isinstance(c, FiniteGroups):
        candidates = []
        for vec, cell in c.cells():
            elem = (h.support & cell).nth_unseen(seen)
            if elem is not None:
                candidates.append((vec, elem))
        # q_v >= 0 per candidate cell; total mass 1; per group the covered
        # mass must land within [pihat - alpha, pihat + alpha].  Distance-0
        # witnesses are preferred, so an exact-tracking system is tried
        # before the banded one.
        for exact in (True, False):
            constraints: list = [([ONE] * len(candidates), simplex.EQ, ONE)]
            for i in c.indices():
                row = [ONE if vec[i - 1] else ZERO for vec, _ in candidates]
                if exact:
                    constraints.append((row, simplex.EQ, pihat[i]))
                else:
                    constraints.append((row, simplex.LE, pihat[i] + alpha))
                    if pihat[i] - alpha > 0:
                        constraints.append((row, simplex.GE, pihat[i] - alpha))
            q = simplex.feasible_point(len(candidates), constraints)
            if q is not None:
                entries = tuple(FeasibilityEntry(vec, elem, m)
                                for (vec, elem), m in zip(candidates, q) if m > 0)
                return FeasibilityWitness(entries)
        return None

    assert isinstance(c, BlockPartition)
    return _feasible_blocks(h, c, seen, pihat, alpha)


def _feasible_blocks(h: Hypothesis, c: BlockPartition, seen: set[int],
                     pihat: dict[int, Fraction],
                     alpha: Fraction) -> FeasibilityWitness | None:
    """Block partitions have one cell per block, so feasibility reduces to
    interval checks: every exhausted touched block must already be within
    alpha of its weight, and any surplus can be spread in alpha-sized chunks
    over untouched blocks (each finite block keeps unseen support elements in
    infinitely many later blocks, the support being infinite)."""
    entries = []
    surplus = ZERO
    for i in sorted(pihat):
        elem = (h.support & c.block_set(i)).nth_unseen(seen)
        if elem is None:
            if pihat[i] > alpha:
                return None
            surplus += pihat[i]
        else:
            entries.append(FeasibilityEntry(i, elem, pihat[i]))
    if surplus > 0:
        if alpha == 0:
            return None
        j = 1
        while surplus > 0:
            if j not in pihat:
                elem = (h.support & c.block_set(j)).nth_unseen(seen)
                if elem is not None:
                    chunk = min(alpha, surplus)
                    entries.append(FeasibilityEntry(j, elem, chunk))
                    surplus -= chunk
            j += 1
    return FeasibilityWitness(tuple(entries))


# -- uniform construction -----------------------------------------------------

def _assemble_uniform(pi: dict[int, Fraction], avail: dict[int, int],
                      exhausted: list[int], alpha: Fraction,
                      history: Sequence[int]) -> RationalDist:
    """Build the emitted distribution from per-group weights, one unseen
    closure element per non-exhausted group, and the exhausted set.

    With a correctly chosen d_star the redistribution always fits the alpha
    cap; the two fallback branches keep emission total (and deterministic)
    when a caller configures d_star below the dimension threshold, which the
    adversary constructions do on purpose.
    """
    if not exhausted:
        return RationalDist({avail[i]: pi[i] for i in avail if pi[i] > 0})
    if not avail:
        return empirical(history)  # closure fully consumed; out of contract
    masses = {i: pi[i] for i in avail}
    order = sorted(avail)
    deficit = sum((pi[i] for i in exhausted), ZERO)
    if deficit > alpha:
        rem = deficit
        for i in order:
            if rem <= 0:
                break
            add = min(alpha, rem)
            masses[i] += add
            rem -= add
        if rem > 0:
            masses[order[0]] += rem  # out of contract (d_star too small)
    elif deficit > 0:
        for i in order:
            if masses[i] <= 1 - deficit:
                masses[i] += deficit
                break
        else:
            masses[order[0]] += deficit  # unreachable with a correct d_star
    return RationalDist({avail[i]: m for i, m in masses.items() if m > 0})


def uniform_emit(cls: HypothesisClass, c: FiniteGroups, alpha: Fraction,
                 d_star: int, history: Sequence[int]) -> RationalDist:
    """One uniform-construction step on the full history.

    Before d_star distinct examples, or when no hypothesis is consistent,
    plays the empirical distribution.  Otherwise splits the groups into
    exhausted ones (no unseen closure element left) and live ones, targets
    each live group's empirical weight on its smallest unseen closure
    element, and redistributes the exhausted weight: spread in alpha-sized
    increments over live groups in index order when it exceeds alpha, or
    added whole to the smallest-index group that can absorb it.
    """
    distinct = set(history)
    if len(distinct) < d_star:
        return empirical(history)
    closure = cls.closure(history)
    if closure is None:
        return empirical(history)
    pi = group_empirical(history, c)
    avail: dict[int, int] = {}
    exhausted: list[int] = []
    for i in c.indices():
        z = (closure & c.group(i)).nth_unseen(distinct)
        if z is None:
            exhausted.append(i)
        else:
            avail[i] = z
    return _assemble_uniform(pi, avail, exhausted, alpha, history)


# -- non-uniform construction -------------------------------------------------

def nonuniform_thresholds(cls: HypothesisClass, c: FiniteGroups,
                          alpha: Fraction, search: GcSearch, upto: int,
                          cache: list[int] | None = None) -> list[int]:
    """Distinct-example thresholds n_i for the first `upto` class prefixes,
    forced non-decreasing by running maxima.  Each raw value is one more than
    the exact dimension of the prefix class; a non-exact search result is a
    configuration error."""
    if cache is None:
        cache = []
    while len(cache) < upto:
        i = len(cache) + 1
        result = gc_dimension(cls.prefix_class(i), c, alpha, search)
        if result.status != "exact":
            raise ConfigError(
                f"dimension of class prefix {i} not certified exact "
                f"(got {result}); raise gc_search.max_d or horizon")
        raw = result.d + 1
        cache.append(max(raw, cache[-1]) if cache else raw)
    return cache


def nonuniform_emit(cls: HypothesisClass, c: FiniteGroups, alpha: Fraction,
                    history: Sequence[int], search: GcSearch = GcSearch(),
                    _threshold_cache: list[int] | None = None) -> RationalDist:
    """One non-uniform step: pick the largest class prefix whose threshold is
    within the distinct count and play its uniform construction.

    The chosen prefix index i_t = max { i <= t : n_i <= d_t } (or 1) can only
    grow along a stream because the thresholds are non-decreasing and both t
    and d_t are monotone.
    """
    t = len(history)
    if t == 0:
        raise ValueError("nonuniform step needs a nonempty history")
    if cls.extendable:
        upto = t
    else:
        upto = min(t, cls.materialized_count())
    n = nonuniform_thresholds(cls, c, alpha, search, upto, _threshold_cache)
    d_t = len(set(history))
    i_t = 1
    for i in range(1, upto + 1):
        if n[i - 1] <= d_t:
            i_t = i
    return uniform_emit(cls.prefix_class(i_t), c, alpha, n[i_t - 1], history)


# -- in-the-limit construction --------------------------------------------------

def _limit_choice(cls: HypothesisClass, c: GroupCollection, alpha: Fraction,
                  history: Sequence[int]
                  ) -> tuple[int | None, FeasibilityWitness | None]:
    t = len(history)
    upto = t if cls.extendable else min(t, cls.materialized_count())
    for n in range(upto, 0, -1):
        if cls.is_critical(n, history):
            w = is_feasible(cls.get(n), c, history, alpha)
            if w is not None:
                return n, w
    return None, None


def limit_emit(cls: HypothesisClass, c: GroupCollection, alpha: Fraction,
               history: Sequence[int]) -> RationalDist:
    """One in-the-limit step: the feasibility witness of the largest-index
    hypothesis that is both critical and alpha-feasible for the history, or
    the empirical distribution when there is none."""
    _, witness = _limit_choice(cls, c, alpha, history)
    if witness is None:
        return empirical(history)
    return witness.distribution()


# -- sessions -------------------------------------------------------------------

class GeneratorSession:
    """Stateful step-by-step interface over the pure constructions.

    The uniform kind keeps incremental consistency, closure and per-group
    cursor state so long fuzzed runs stay cheap; its output is identical to
    calling uniform_emit on the accumulated history (tested).
    """

    def __init__(self, kind: str, cls: HypothesisClass, groups: GroupCollection,
                 alpha: Fraction, d_star: int | None = None,
                 gc_search: GcSearch = GcSearch()):
        if kind not in KINDS:
            raise ConfigError(f"unknown generator kind {kind!r}")
        if not isinstance(alpha, Fraction):
            alpha = Fraction(alpha)
        if not (0 <= alpha <= 1):
            raise ConfigError(f"alpha must be in [0, 1], got {alpha}")
        self.kind = kind
        self.cls = cls
        self.groups = groups
        self.alpha = alpha
        self.gc_search = gc_search
        self.history: list[int] = []
        self.last_selected: int | None = None

        if kind in ("uniform", "nonuniform"):
            if not isinstance(groups, FiniteGroups):
                raise ConfigError(f"{kind} generator requires a finite partition")
            if not groups.validate().partition:
                raise ConfigError(f"{kind} generator requires a partition")
        if kind == "uniform":
            if cls.extendable:
                raise ConfigError("uniform generator requires a finite class")
            if d_star is None:
                result = gc_dimension(cls, groups, alpha, gc_search)
                if result.status != "exact":
                    raise ConfigError(
                        f"cannot derive d_star: dimension not certified exact ({result}); "
                        "raise gc_search.max_d or horizon, or set d_star explicitly")
                d_star = result.d + 1
            if d_star < 1:
                raise ConfigError(f"d_star must be >= 1, got {d_star}")
            self.d_star = d_star
            self._seen: set[int] = set()
            self._consistent = tuple(range(1, cls.materialized_count() + 1))
            self._closure: PeriodicSet | None = cls.closure_of_indices(self._consistent)
            self._counts: dict[int, int] = {i: 0 for i in groups.indices()}
            self._cursors: dict[int, tuple[Iterator[int], int | None]] | None = None
        elif kind == "nonuniform":
            self.d_star = None
            self._thresholds: list[int] = []
        elif kind == "inlimit":
            if isinstance(groups, FiniteGroups):
                if not groups.validate().covers:
                    raise ConfigError("inlimit generator requires a covering collection")
                # Finite support sizes are always defined against a finite
                # collection; evaluating them here honors the declared
                # precondition.  Block partitions cannot be pre-checked this
                # way (the sum has infinitely many terms), which is exactly
                # the situation the geometric adversary exploits.
                for i in range(1, cls.materialized_count() + 1):
                    finite_support_size(cls.get(i), groups)
            self.d_star = None
        else:
            self.d_star = d_star

    def step(self, x: int) -> RationalDist:
        if not isinstance(x, int) or x < 0:
            raise ValueError(f"examples are naturals, got {x!r}")
        self.history.append(x)
        if self.kind == "empirical":
            return empirical(self.history)
        if self.kind == "uniform":
            return self._uniform_step(x)
        if self.kind == "nonuniform":
            return nonuniform_emit(self.cls, self.groups, self.alpha,
                                   self.history, self.gc_search,
                                   _threshold_cache=self._thresholds)
        selected, witness = _limit_choice(self.cls, self.groups, self.alpha,
                                          self.history)
        self.last_selected = selected
        if witness is None:
            return empirical(self.history)
        return witness.distribution()

    # uniform fast path: consistency and closure only change when a new
    # distinct element arrives; smallest-unseen cursors only move forward.

    def _uniform_step(self, x: int) -> RationalDist:
        if x not in self._seen:
            self._seen.add(x)
            for i in self.groups.groups_containing(x):
                self._counts[i] += 1
            kept = tuple(i for i in self._consistent
                         if x in self.cls.get(i).support)
            if kept != self._consistent:
                self._consistent = kept
                self._closure = self.cls.closure_of_indices(kept)
                self._cursors = None
        d_t = len(self._seen)
        if d_t < self.d_star or self._closure is None:
            return empirical(self.history)
        if self._cursors is None:
            self._cursors = {}
            for i in self.groups.indices():
                gen = (self._closure & self.groups.group(i)).members()
                self._cursors[i] = (gen, next(gen, None))
        pi = {i: Fraction(self._counts[i], d_t) for i in self.groups.indices()}
        avail: dict[int, int] = {}
        exhausted: list[int] = []
        for i in self.groups.indices():
            gen, cur = self._cursors[i]
            while cur is not None and cur in self._seen:
                cur = next(gen, None)
            self._cursors[i] = (gen, cur)
            if cur is None:
                exhausted.append(i)
            else:
                avail[i] = cur
        return _assemble_uniform(pi, avail, exhausted, self.alpha, self.history)
