"""Massey and Colley ratings, the Y* certainty matrix and pseudo-optimal sets.

Systems with integral data are solved exactly over the rationals. Above
``EXACT_LIMIT`` teams the solve falls back to floating point, guarded by a
residual check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .core import Ranking
from .lop import DEFAULT_CAP

EXACT_LIMIT = 60
RESIDUAL_TOL = 1e-9
FLOAT_EPSILON = 1e-9


class GameRecord(NamedTuple):
    team_a: int
    score_a: int
    team_b: int
    score_b: int


@dataclass(frozen=True)
class RatingResult:
    ratings: tuple
    ranking: Ranking
    ystar: tuple
    pseudo_optimal: tuple
    exact: bool


def _check_games(games, n):
    if n < 2:
        raise ValueError("rating systems need at least two teams")
    out = []
    for k, g in enumerate(games):
        g = GameRecord(*g)
        if g.team_a == g.team_b:
            raise ValueError(f"game {k}: a team cannot play itself")
        for t in (g.team_a, g.team_b):
            if not 0 <= t < n:
                raise ValueError(f"game {k}: team index {t} out of range for n={n}")
        if g.score_a < 0 or g.score_b < 0:
            raise ValueError(f"game {k}: negative score")
        out.append(g)
    return out


def solve_exact(A, b) -> list:
    """Gauss-Jordan elimination over Fractions with partial pivoting on nonzero entries."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise np.linalg.LinAlgError("singular system")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        row = [x / p for x in M[col]]
        M[col] = row
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], row)]
    return [M[i][n] for i in range(n)]


def solve_float(A, b) -> list:
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.linalg.solve(A, b)
    residual = np.max(np.abs(A @ x - b)) if len(b) else 0.0
    if residual > RESIDUAL_TOL:
        raise np.linalg.LinAlgError(f"residual {residual:.3g} exceeds {RESIDUAL_TOL}")
    return [float(v) for v in x]


def _solve(A, b):
    if len(A) <= EXACT_LIMIT:
        return solve_exact(A, b), True
    return solve_float(A, b), False


def _connected(games, n) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in games:
        parent[find(g.team_a)] = find(g.team_b)
    return len({find(i) for i in range(n)}) == 1


def massey(games, n: int, epsilon=None, cap: int = DEFAULT_CAP) -> RatingResult:
    """Massey least-squares ratings from raw point differentials; ratings sum to 0."""
    games = _check_games(games, n)
    if not _connected(games, n):
        raise ValueError("Massey needs a connected schedule")
    M = [[0] * n for _ in range(n)]
    p = [0] * n
    for g in games:
        a, b = g.team_a, g.team_b
        M[a][a] += 1
        M[b][b] += 1
        M[a][b] -= 1
        M[b][a] -= 1
        p[a] += g.score_a - g.score_b
        p[b] += g.score_b - g.score_a
    M[-1] = [1] * n
    p[-1] = 0
    ratings, exact = _solve(M, p)
    return _result(ratings, exact, epsilon, cap)


def colley(games, n: int, epsilon=None, cap: int = DEFAULT_CAP) -> RatingResult:
    """Colley ratings; only wins and losses matter, and ratings sum to n/2."""
    games = _check_games(games, n)
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
    b = [Fraction(1)] * n
    for g in games:
        a, o = g.team_a, g.team_b
        C[a][a] += 1
        C[o][o] += 1
        C[a][o] -= 1
        C[o][a] -= 1
        if g.score_a > g.score_b:
            b[a] += Fraction(1, 2)
            b[o] -= Fraction(1, 2)
        elif g.score_b > g.score_a:
            b[o] += Fraction(1, 2)
            b[a] -= Fraction(1, 2)
    ratings, exact = _solve(C, b)
    return _result(ratings, exact, epsilon, cap)


def _result(ratings, exact, epsilon, cap) -> RatingResult:
    if epsilon is None:
        epsilon = 0 if exact else FLOAT_EPSILON
    ratings = tuple(ratings)
    order = sorted(range(len(ratings)), key=lambda i: (-ratings[i], i))
    return RatingResult(
        ratings=ratings,
        ranking=Ranking(tuple(order)),
        ystar=ystar_from_ratings(ratings),
        pseudo_optimal=tuple(pseudo_optimal_set(ratings, epsilon, cap)),
        exact=exact,
    )


def ystar_from_ratings(ratings) -> tuple:
    """Certainty that i ranks above j, by linear rescaling of rating gaps into [0, 1]."""
    n = len(ratings)
    if n < 2:
        raise ValueError("Y* needs at least two ratings")
    exact = all(isinstance(r, (int, Fraction)) for r in ratings)
    if exact:
        ratings = [Fraction(r) for r in ratings]
    half = Fraction(1, 2) if exact else 0.5
    spread = max(ratings) - min(ratings)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(0 * half)
            elif spread == 0:
                row.append(half)
            else:
                y = half + (ratings[i] - ratings[j]) / (2 * spread)
                row.append(min(max(y, 0 * half), 2 * half))
        rows.append(tuple(row))
    return tuple(rows)


def tie_blocks(ratings, epsilon) -> list:
    """Items sorted by rating (descending, index breaks ties), chained into blocks
    where consecutive ratings differ by at most ``epsilon``."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    order = sorted(range(len(ratings)), key=lambda i: (-ratings[i], i))
    blocks = []
    for item in order:
        if blocks and ratings[blocks[-1][-1]] - ratings[item] <= epsilon:
            blocks[-1].append(item)
        else:
            blocks.append([item])
    return blocks


def pseudo_optimal_set(ratings, epsilon=0, cap: int = DEFAULT_CAP) -> list:
    """All rankings obtained by permuting items within rating tie-blocks (first ``cap``)."""
    blocks = [sorted(b) for b in tie_blocks(ratings, epsilon)]

    # blocks hold fixed position ranges and permutations() of a sorted block
    # is lexicographic, so this yields rankings in lexicographic order
    def expand(k):
        if k == len(blocks):
            yield ()
            return
        for head in itertools.permutations(blocks[k]):
            for tail in expand(k + 1):
                yield head + tail

    return [Ranking(order) for order in itertools.islice(expand(0), cap)]
