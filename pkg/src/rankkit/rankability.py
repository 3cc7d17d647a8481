"""Rankability measures and the geometry of a set of optimal rankings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import DominanceMatrix, Measures, OptimalSet, Ranking, rank_vector
from .lop import DEFAULT_CAP, PROBLEMS, k_problem, solve_enumerate

# rows of the pair-order matrix processed per block when scanning all pairs
_BLOCK = 2048


@dataclass(frozen=True)
class XStar:
    """Pairwise consensus of an optimal set, in reference-reordered coordinates.

    ``values[i][j]`` is the fraction of optima that put the item at reference
    position ``i`` above the item at reference position ``j``.
    """

    values: tuple
    reference: Ranking
    estimated: bool = False

    def __post_init__(self):
        n = len(self.values)
        if len(self.reference) != n:
            raise ValueError("reference ranking does not match X* size")
        for i in range(n):
            if self.values[i][i] != 0:
                raise ValueError("X* diagonal must be 0")
            for j in range(n):
                x = self.values[i][j]
                if not 0 <= x <= 1:
                    raise ValueError(f"X*[{i}][{j}] outside [0, 1]")
                if i != j and x + self.values[j][i] != 1:
                    raise ValueError(f"X*[{i}][{j}] + X*[{j}][{i}] != 1")

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SetGeometry:
    diameter: int
    farthest_pair: tuple
    closest_pair: Optional[tuple]
    centroid_closest: Ranking
    centroid_farthest: Ranking


def _pair_bits(rankings) -> np.ndarray:
    """One row per ranking, one 0/1 column per item pair (a < b): a above b."""
    pos = np.array([rank_vector(r) for r in rankings], dtype=np.int64)
    a, b = np.triu_indices(pos.shape[1], k=1)
    return (pos[:, a] < pos[:, b]).astype(np.float64)


def set_geometry(P: OptimalSet) -> SetGeometry:
    """Diameter, extreme pairs and centroid-nearest/farthest members of ``P``.

    Kendall distances are Hamming distances between pair-order bit vectors,
    computed blockwise by matrix products (exact: integers well below 2**53).
    Ties go to the lexicographically smallest ranking or pair.
    """
    rankings = list(P.rankings)
    if not rankings:
        raise ValueError("optimal set is empty")
    m = len(rankings)

    far, near = (-1, None), (None, None)
    if m >= 2:
        bits = _pair_bits(rankings)
        inv = 1.0 - bits
        for start in range(0, m, _BLOCK):
            blk = bits[start:start + _BLOCK]
            dist = blk @ inv.T + (1.0 - blk) @ bits.T
            dist = np.rint(dist).astype(np.int64)
            rows = np.arange(start, start + blk.shape[0])[:, None]
            cols = np.arange(m)[None, :]
            upper = cols > rows
            masked_max = np.where(upper, dist, -1)
            masked_min = np.where(upper, dist, np.iinfo(np.int64).max)
            # argmax/argmin on the flattened block return the first hit, i.e. the lexicographic pair
            i, j = np.unravel_index(np.argmax(masked_max), dist.shape)
            if masked_max[i, j] > far[0]:
                far = (int(masked_max[i, j]), (start + i, j))
            i, j = np.unravel_index(np.argmin(masked_min), dist.shape)
            if upper[i, j] and (near[0] is None or masked_min[i, j] < near[0]):
                near = (int(masked_min[i, j]), (start + i, j))

    if m >= 2:
        diameter = far[0]
        farthest_pair = (rankings[far[1][0]], rankings[far[1][1]])
        closest_pair = (rankings[near[1][0]], rankings[near[1][1]])
    else:
        diameter = 0
        farthest_pair = (rankings[0], rankings[0])
        closest_pair = None

    # squared distance to the mean rank vector, scaled by m and shifted by a
    # per-set constant so it stays an exact integer: m*|v|^2 - 2 v.(sum of vectors)
    vecs = np.array([rank_vector(r) for r in rankings], dtype=object)
    total = vecs.sum(axis=0)
    score = [m * int(np.dot(v, v)) - 2 * int(np.dot(v, total)) for v in vecs]
    lo = min(range(m), key=lambda i: (score[i], i))
    hi = min(range(m), key=lambda i: (-score[i], i))

    return SetGeometry(diameter, farthest_pair, closest_pair, rankings[lo], rankings[hi])


def centroid(P: OptimalSet) -> list:
    """Mean rank vector (1-based positions) as exact fractions."""
    m = len(P)
    sums = [0] * P.n
    for r in P.rankings:
        for item, pos in enumerate(rank_vector(r)):
            sums[item] += pos
    return [Fraction(s, m) for s in sums]


def xstar(P: OptimalSet, reference) -> XStar:
    if not isinstance(reference, Ranking):
        reference = Ranking(tuple(reference))
    n = P.n
    if len(reference) != n:
        raise ValueError(f"reference has {len(reference)} items, optimal set has {n}")
    m = len(P)
    pos = np.array([rank_vector(r) for r in P.rankings], dtype=np.int64)
    # above[a, b] = number of optima ranking a above b
    above = (pos[:, :, None] < pos[:, None, :]).sum(axis=0)
    ref = reference.order
    values = tuple(
        tuple(Fraction(0) if i == j else Fraction(int(above[ref[i], ref[j]]), m) for j in range(n))
        for i in range(n)
    )
    return XStar(values, reference, estimated=not P.complete)


def beta_weight(i: int, j: int, n: int) -> int:
    """Weight of reference positions ``i < j``: far from the diagonal and near the top count more."""
    return (j - i) * (n - i)


def beta(X: XStar) -> Fraction:
    """Position-weighted indecision of X*; 0 iff no fractional entries, 1 at total indecision.

    Each pair contributes ``2 * min(x, 1 - x)``, weighted by :func:`beta_weight`.
    """
    n = X.n
    num = Fraction(0)
    den = 0
    for i in range(n):
        for j in range(i + 1, n):
            x = X.values[i][j]
            w = beta_weight(i, j, n)
            num += w * 2 * min(x, 1 - x)
            den += w
    if den == 0:
        return Fraction(0)
    return num / den


@dataclass(frozen=True)
class Analysis:
    """Everything computed for one instance under one method."""

    method: str
    optimal: OptimalSet
    geometry: SetGeometry
    xstar: XStar
    measures: Measures
    k_set: Optional[OptimalSet]


def analyze(D: DominanceMatrix, method: str = "lop", cap: int = DEFAULT_CAP, workers: int = 1) -> Analysis:
    if method not in PROBLEMS:
        raise ValueError(f"unknown method {method!r}")
    k_set = None if D.weighted else solve_enumerate(k_problem(D), cap, workers)
    P = k_set if method == "k" and k_set is not None else solve_enumerate(PROBLEMS[method](D), cap, workers)
    geo = set_geometry(P)
    X = xstar(P, geo.centroid_closest)
    m = Measures(
        k=None if k_set is None else k_set.objective,
        p=len(P),
        tau=geo.diameter,
        beta=beta(X),
        p_k=None if k_set is None else len(k_set),
    )
    return Analysis(method, P, geo, X, m, k_set)


def measures(D: DominanceMatrix, method: str = "lop", cap: int = DEFAULT_CAP, workers: int = 1) -> Measures:
    """``(k, p, tau, beta)`` for D; ``k`` is None when D is weighted."""
    return analyze(D, method, cap, workers).measures
