"""Seeded generators for structured artificial dominance matrices.

Randomness contract
-------------------
All draws come from numpy's PCG64 bit generator seeded through
``SeedSequence(seed, spawn_key=...)``; only ``random_raw()`` is used, whose
output numpy keeps stable across releases and platforms. Bounded integers
use rejection sampling on 64-bit words, shuffles are Fisher-Yates from the
last index down, and uniforms in [0, 1) are the top 53 bits of a word.

Streams:

* ``(1,)`` chooses which off-diagonal cells receive noise (shuffle of the
  row-major cell list, first ``count`` cells taken);
* ``(2, i, j)`` draws the noise value for cell ``(i, j)``;
* ``(3, i, j)`` simulates the games between ``i < j``;
* ``(4,)`` / ``(5,)`` choose cells removed / added by :func:`perturb`, and
  ``(6, i, j)`` draws the value of an added weighted cell.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import DominanceMatrix

KINDS = (
    "empty",
    "empty_plus_noise",
    "connected",
    "connected_minus_noise",
    "dominance_plus_noise",
    "hillside_plus_noise",
    "cyclic",
    "special",
    "simulate_games",
)
STOCHASTIC = {
    "empty_plus_noise",
    "connected_minus_noise",
    "dominance_plus_noise",
    "hillside_plus_noise",
    "simulate_games",
}

_TWO64 = 1 << 64


class Stream:
    """Portable 64-bit random stream (PCG64 words) for one derivation key."""

    def __init__(self, seed: int, *key: int):
        ss = np.random.SeedSequence(seed, spawn_key=key)
        self._bits = np.random.PCG64(ss)

    def word(self) -> int:
        return int(self._bits.random_raw())

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound < 1:
            raise ValueError("bound must be positive")
        limit = _TWO64 - _TWO64 % bound
        while True:
            w = self.word()
            if w < limit:
                return w % bound

    def integer(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def uniform(self) -> float:
        return (self.word() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> list:
        items = list(items)
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    percent: float = 0
    lo: int = 1
    hi: int = 1
    block_begin: Optional[int] = None
    block_end: Optional[int] = None
    p_upset: float = 0.0
    games_per_pair: int = 1
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0 <= self.percent <= 100:
            raise ValueError("percent must lie in [0, 100]")
        if self.lo > self.hi:
            raise ValueError("lo must not exceed hi")
        if self.lo < 0:
            raise ValueError("noise values must be nonnegative")
        if not 0 <= self.p_upset <= 1:
            raise ValueError("p_upset must lie in [0, 1]")
        if self.games_per_pair < 1:
            raise ValueError("games_per_pair must be at least 1")
        if self.kind == "special":
            b, e = self.block_begin, self.block_end
            if b is None or e is None or not 1 <= b <= e <= self.n:
                raise ValueError("special needs 1 <= block_begin <= block_end <= n")
        if self.kind in STOCHASTIC:
            if self.seed is None:
                raise ValueError(f"kind {self.kind!r} needs a seed")
        if self.seed is not None and not 0 <= self.seed < _TWO64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def to_dict(self) -> dict:
        return asdict(self)


def noise_count(percent, cells: int) -> int:
    """``round_half_up(percent / 100 * cells)``, computed exactly."""
    x = Fraction(str(percent)) * cells / 100
    return math.floor(x + Fraction(1, 2))


def _off_diagonal(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def _chosen_cells(spec: GenSpec):
    cells = _off_diagonal(spec.n)
    count = noise_count(spec.percent, len(cells))
    return Stream(spec.seed, 1).shuffle(cells)[:count]


def _noise_value(spec: GenSpec, i: int, j: int) -> int:
    return Stream(spec.seed, 2, i, j).integer(spec.lo, spec.hi)


def generate(spec: GenSpec) -> DominanceMatrix:
    n = spec.n
    kind = spec.kind
    D = [[0] * n for _ in range(n)]

    if kind in ("connected", "connected_minus_noise"):
        for i, j in _off_diagonal(n):
            D[i][j] = 1
    elif kind == "dominance_plus_noise" or kind == "special":
        for i in range(n):
            for j in range(i + 1, n):
                D[i][j] = 1
    elif kind == "hillside_plus_noise":
        for i in range(n):
            for j in range(i + 1, n):
                D[i][j] = j - i
    elif kind == "cyclic":
        for i in range(n):
            j = (i + 1) % n
            if j != i:
                D[i][j] = 1
    elif kind == "simulate_games":
        for i in range(n):
            for j in range(i + 1, n):
                s = Stream(spec.seed, 3, i, j)
                for _ in range(spec.games_per_pair):
                    if s.uniform() < spec.p_upset:
                        D[j][i] += 1
                    else:
                        D[i][j] += 1

    if kind == "empty_plus_noise" or kind == "hillside_plus_noise":
        for i, j in _chosen_cells(spec):
            D[i][j] = _noise_value(spec, i, j)
    elif kind == "connected_minus_noise":
        for i, j in _chosen_cells(spec):
            D[i][j] = 0
    elif kind == "dominance_plus_noise":
        for i, j in _chosen_cells(spec):
            D[i][j] = 1 - D[i][j]
    elif kind == "special":
        lo, hi = spec.block_begin - 1, spec.block_end
        # block members tie with each other and share their relations to outsiders
        for i in range(lo, hi):
            for j in range(lo, hi):
                D[i][j] = 0

    return DominanceMatrix(tuple(map(tuple, D)))


def special(n: int, block_begin: int, block_end: int) -> DominanceMatrix:
    return generate(GenSpec("special", n, block_begin=block_begin, block_end=block_end))


def unweighted(D: DominanceMatrix) -> DominanceMatrix:
    """Binary matrix with a 1 wherever i strictly beats j."""
    n = D.n
    e = D.entries
    rows = tuple(tuple(1 if e[i][j] > e[j][i] else 0 for j in range(n)) for i in range(n))
    return DominanceMatrix(rows, D.item_names)


def perturb(
    D: DominanceMatrix,
    add_percent=0,
    remove_percent=0,
    seed: int = 0,
    lo: int = 1,
    hi: int = 1,
) -> DominanceMatrix:
    """Remove a share of the nonzero cells and fill a share of the zero off-diagonal cells.

    Both shares are taken from the input matrix, so a removed cell is never
    re-added. Added cells get 1 on binary input, a uniform integer in
    ``[lo, hi]`` otherwise.
    """
    for pct in (add_percent, remove_percent):
        if not 0 <= pct <= 100:
            raise ValueError("percentages must lie in [0, 100]")
    if lo > hi or lo < 1:
        raise ValueError("added values need 1 <= lo <= hi")
    binary = not D.weighted
    rows = [list(r) for r in D.entries]
    cells = _off_diagonal(D.n)
    nonzero = [c for c in cells if rows[c[0]][c[1]] != 0]
    zero = [c for c in cells if rows[c[0]][c[1]] == 0]

    for i, j in Stream(seed, 4).shuffle(nonzero)[: noise_count(remove_percent, len(nonzero))]:
        rows[i][j] = 0
    for i, j in Stream(seed, 5).shuffle(zero)[: noise_count(add_percent, len(zero))]:
        rows[i][j] = 1 if binary else Stream(seed, 6, i, j).integer(lo, hi)
    return DominanceMatrix(tuple(map(tuple, rows)), D.item_names)
