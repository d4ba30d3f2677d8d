"""Group collections over the naturals.

Two shapes are supported: a finite, possibly overlapping family of periodic
sets, and an infinite partition into consecutive finite blocks whose sizes
follow an explicit list with a geometric tail.  Group indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence, Union

from .errors import ConfigError
from .hypotheses import Hypothesis, HypothesisClass
from .periodic import ALL, PeriodicSet, interval


@dataclass(frozen=True)
class ValidationReport:
    covers: bool
    partition: bool


class FiniteGroups:
    """Ordered finite family A_1, ..., A_K of periodic sets."""

    def __init__(self, groups: Sequence[PeriodicSet]):
        if not groups:
            raise ValueError("group collection must not be empty")
        self._groups = tuple(groups)
        self._report: ValidationReport | None = None
        self._cells: list[tuple[tuple[int, ...], PeriodicSet]] | None = None

    @property
    def k(self) -> int:
        return len(self._groups)

    def group(self, i: int) -> PeriodicSet:
        if not (1 <= i <= len(self._groups)):
            raise IndexError(f"group indices are 1-based up to {len(self._groups)}, got {i}")
        return self._groups[i - 1]

    def indices(self) -> range:
        return range(1, len(self._groups) + 1)

    def validate(self) -> ValidationReport:
        if self._report is None:
            union = self._groups[0]
            for g in self._groups[1:]:
                union = union | g
            covers = union == ALL
            partition = covers and all(
                (self._groups[i] & self._groups[j]).is_empty()
                for i in range(len(self._groups))
                for j in range(i + 1, len(self._groups)))
            self._report = ValidationReport(covers, partition)
        return self._report

    def membership_vector(self, x: int) -> tuple[int, ...]:
        return tuple(1 if x in g else 0 for g in self._groups)

    def groups_containing(self, x: int) -> list[int]:
        return [i for i, g in enumerate(self._groups, start=1) if x in g]

    def cells(self) -> list[tuple[tuple[int, ...], PeriodicSet]]:
        """Atoms of the collection: every realizable nonzero membership vector
        paired with its exact set.  Deterministic order (vectors enumerated
        with 1 before 0 per coordinate)."""
        if self._cells is None:
            out = []
            for vec in product((1, 0), repeat=len(self._groups)):
                if not any(vec):
                    continue
                cell = ALL
                for bit, g in zip(vec, self._groups):
                    cell = (cell & g) if bit else (cell - g)
                    if cell.is_empty():
                        break
                if not cell.is_empty():
                    out.append((vec, cell))
            self._cells = out
        return self._cells

    def __repr__(self) -> str:
        return f"FiniteGroups(k={self.k})"


class BlockPartition:
    """Partition of the naturals into consecutive finite blocks.

    Block k (1-based) has size sizes[k] where sizes follows the explicit
    `prefix_sizes` list and then grows geometrically: each further block is
    `base` times the previous one.  With an empty prefix the sizes are
    1, base, base^2, ... so block 1 is {0}.
    """

    def __init__(self, base: int, prefix_sizes: Sequence[int] = ()):
        if base < 2:
            raise ValueError(f"block growth base must be >= 2, got {base}")
        if any(s < 1 for s in prefix_sizes):
            raise ValueError("block sizes must be >= 1")
        self.base = base
        self.prefix_sizes = tuple(prefix_sizes)
        self._bounds = [0]  # cumulative: block k covers [_bounds[k-1], _bounds[k])

    def size(self, k: int) -> int:
        if k < 1:
            raise IndexError(f"block indices are 1-based, got {k}")
        if k <= len(self.prefix_sizes):
            return self.prefix_sizes[k - 1]
        last = self.prefix_sizes[-1] if self.prefix_sizes else 1
        return last * self.base ** (k - len(self.prefix_sizes))

    def _extend_bounds(self, k: int) -> None:
        while len(self._bounds) <= k:
            self._bounds.append(self._bounds[-1] + self.size(len(self._bounds)))

    def block_range(self, k: int) -> tuple[int, int]:
        """Half-open element range [lo, hi) of block k."""
        self._extend_bounds(k)
        return self._bounds[k - 1], self._bounds[k]

    def block_set(self, k: int) -> PeriodicSet:
        lo, hi = self.block_range(k)
        return interval(lo, hi)

    def group_index(self, x: int) -> int:
        if x < 0:
            raise ValueError(f"elements are naturals, got {x}")
        k = 1
        while True:
            self._extend_bounds(k)
            if x < self._bounds[k]:
                return k
            k += 1

    def validate(self) -> ValidationReport:
        # Consecutive blocks tile the naturals by construction.
        return ValidationReport(covers=True, partition=True)

    def __repr__(self) -> str:
        return f"BlockPartition(base={self.base}, prefix_sizes={list(self.prefix_sizes)})"


GroupCollection = Union[FiniteGroups, BlockPartition]


def require_finite(c: GroupCollection, what: str) -> FiniteGroups:
    if not isinstance(c, FiniteGroups):
        raise ConfigError(f"{what} requires a finite group collection, got {c!r}")
    return c


def finite_support_size(h: Hypothesis, c: FiniteGroups) -> int:
    """Sum, over nonempty subfamilies whose intersection with the support is
    finite, of the size of that intersection.

    The empty subfamily is excluded, so only actual group overlap structure
    contributes; empty intersections contribute 0.
    """
    k = c.k
    total = 0
    for mask in range(1, 2 ** k):
        inter = h.support
        for i in range(k):
            if mask & (1 << i):
                inter = inter & c.group(i + 1)
                if inter.is_empty():
                    break
        n = inter.size_if_finite()
        if n is not None:
            total += n
    return total


def has_finite_support(cls: HypothesisClass, c: FiniteGroups,
                       upto: int | None = None) -> bool:
    """Whether every hypothesis (up to `upto` for provider-backed classes)
    has a well-defined finite support size.  For finite collections the sum
    is always a natural, so this amounts to evaluating it."""
    n = cls.materialized_count() if upto is None else upto
    for i in range(1, n + 1):
        finite_support_size(cls.get(i), c)
    return True
