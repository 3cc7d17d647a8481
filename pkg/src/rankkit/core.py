"""Domain types and ranking arithmetic shared across the package.

Matrix entries are held as :class:`fractions.Fraction` so that objective
values, ties between alternate optima and consensus fractions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

MAXIMIZE = "maximize"
MINIMIZE = "minimize"
SENSES = (MAXIMIZE, MINIMIZE)


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions, decimal strings and ``"p/q"`` strings exactly.

    Floats are accepted through their decimal repr (``0.1`` -> ``1/10``),
    never through their binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class DominanceMatrix:
    """Square nonnegative matrix; ``entries[i][j]`` is evidence that i beats j."""

    entries: tuple
    item_names: Optional[tuple] = None

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in self.entries)
        n = len(rows)
        if n < 1:
            raise ValueError("dominance matrix needs at least one item")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            if row[i] != 0:
                raise ValueError(f"diagonal entry ({i},{i}) must be 0")
            for j, x in enumerate(row):
                if x < 0:
                    raise ValueError(f"entry ({i},{j}) is negative")
        object.__setattr__(self, "entries", rows)
        if self.item_names is not None:
            names = tuple(str(s) for s in self.item_names)
            if len(names) != n:
                raise ValueError(f"{len(names)} item names for {n} items")
            object.__setattr__(self, "item_names", names)

    @classmethod
    def zeros(cls, n: int, item_names=None) -> "DominanceMatrix":
        return cls(tuple((0,) * n for _ in range(n)), item_names)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def weighted(self) -> bool:
        return any(x not in (0, 1) for row in self.entries for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list:
        return [list(row) for row in self.entries]

    def to_float_array(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self.entries])


@dataclass(frozen=True, order=True)
class Ranking:
    """Permutation of item indices, best item first."""

    order: tuple

    def __post_init__(self):
        order = tuple(int(x) for x in self.order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"{list(order)} is not a permutation of 0..{len(order) - 1}")
        object.__setattr__(self, "order", order)

    @classmethod
    def from_rank_vector(cls, ranks: Sequence[int]) -> "Ranking":
        """Inverse of :func:`rank_vector`: ``ranks[item]`` is a 1-based position."""
        n = len(ranks)
        order = [None] * n
        for item, pos in enumerate(ranks):
            if not isinstance(pos, int) or isinstance(pos, bool) or not 1 <= pos <= n:
                raise ValueError(f"rank position {pos!r} out of range 1..{n}")
            if order[pos - 1] is not None:
                raise ValueError(f"rank position {pos} used twice")
            order[pos - 1] = item
        return cls(tuple(order))

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)


@dataclass(frozen=True)
class OptimalSet:
    """Enumerated optimal rankings of a cost problem.

    ``complete`` is False only when enumeration stopped at ``cap`` rankings;
    in that case ``rankings`` holds the ``cap`` lexicographically smallest optima.
    """

    objective: Fraction
    sense: str
    rankings: tuple
    complete: bool
    cap: int

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")
        rankings = tuple(r if isinstance(r, Ranking) else Ranking(tuple(r)) for r in self.rankings)
        if not rankings:
            raise ValueError("an optimal set cannot be empty")
        if any(a.order >= b.order for a, b in zip(rankings, rankings[1:])):
            raise ValueError("rankings must be strictly lexicographically increasing")
        if not self.complete and len(rankings) != self.cap:
            raise ValueError("incomplete optimal set must hold exactly cap rankings")
        object.__setattr__(self, "rankings", rankings)
        object.__setattr__(self, "objective", to_fraction(self.objective))

    @property
    def n(self) -> int:
        return len(self.rankings[0])

    def __len__(self):
        return len(self.rankings)


@dataclass(frozen=True)
class Measures:
    """Rankability quadruple. ``k`` is None when D is weighted."""

    k: Optional[Fraction]
    p: int
    tau: int
    beta: Fraction
    p_k: Optional[int] = field(default=None, compare=True)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if not 0 <= self.beta <= 1:
            raise ValueError("beta must lie in [0, 1]")
        if self.p == 1 and (self.tau != 0 or self.beta != 0):
            raise ValueError("a unique optimum has tau == 0 and beta == 0")


def _order(r) -> tuple:
    return r.order if isinstance(r, Ranking) else tuple(r)


def kendall_tau(a, b) -> int:
    """Number of item pairs ordered oppositely by rankings ``a`` and ``b``."""
    a, b = _order(a), _order(b)
    if len(a) != len(b):
        raise ValueError(f"rankings have different lengths ({len(a)} vs {len(b)})")
    pos_b = [0] * len(b)
    for p, item in enumerate(b):
        pos_b[item] = p
    seq = [pos_b[item] for item in a]
    # inversion count of seq, O(n^2) is fine at ranking sizes we handle
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def rank_vector(r) -> list:
    """``v[item]`` = 1-based position of ``item`` in ``r``."""
    order = _order(r)
    v = [0] * len(order)
    for pos, item in enumerate(order):
        v[item] = pos + 1
    return v


def rankings_from_orders(orders: Iterable) -> tuple:
    return tuple(Ranking(tuple(o)) for o in orders)
