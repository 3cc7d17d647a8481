"""Exact linear ordering optimization with enumeration of alternate optima.

Every objective handled here (LOP, hillside, k) is expressed as a
:class:`CostProblem`: the value of a ranking ``r`` is the sum of
``cost[r[i]][r[j]]`` over positions ``i < j``.

The solver works in integer "loss" space. For a pair ``{v, w}`` the best
case contributes ``max(c[v][w], c[w][v])``; putting ``v`` above ``w`` loses
``max(0, c[w][v] - c[v][w])`` relative to that. The total loss of a full
ranking is therefore ``upper - objective`` and partial losses only grow, so
the accumulated loss of a prefix is an admissible bound.

Search runs in two phases:

1. best-first branch and bound finds the minimum loss;
2. a depth-first sweep with children in increasing item order collects
   every ranking reaching that loss, in lexicographic order, stopping after
   ``cap`` rankings. This makes the output canonical regardless of worker
   count.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .core import MAXIMIZE, MINIMIZE, SENSES, DominanceMatrix, OptimalSet, Ranking, to_fraction

DEFAULT_CAP = 10000


@dataclass(frozen=True)
class CostProblem:
    cost: tuple
    sense: str

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in self.cost)
        n = len(rows)
        if n < 1 or any(len(row) != n for row in rows):
            raise ValueError("cost matrix must be square and nonempty")
        if any(rows[i][i] != 0 for i in range(n)):
            raise ValueError("cost diagonal must be 0")
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")
        object.__setattr__(self, "cost", rows)

    @property
    def n(self) -> int:
        return len(self.cost)

    def objective(self, ranking) -> Fraction:
        order = ranking.order if isinstance(ranking, Ranking) else tuple(ranking)
        c = self.cost
        return sum(
            (c[order[i]][order[j]] for i in range(len(order)) for j in range(i + 1, len(order))),
            Fraction(0),
        )


def lop_problem(D: DominanceMatrix) -> CostProblem:
    return CostProblem(D.entries, MAXIMIZE)


def hillside_problem(D: DominanceMatrix) -> CostProblem:
    """Hillside violation counts, minimized.

    ``cost(i, j)`` counts the columns where row ``i`` is strictly below row
    ``j`` plus the rows where column ``j`` is strictly below column ``i``;
    both are violations of hillside shape when ``i`` is placed above ``j``.
    """
    d = D.entries
    n = D.n
    cost = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                cost[i][j] = sum(1 for k in range(n) if d[i][k] < d[j][k]) + sum(
                    1 for k in range(n) if d[k][j] < d[k][i]
                )
    return CostProblem(tuple(map(tuple, cost)), MINIMIZE)


def k_problem(D: DominanceMatrix) -> CostProblem:
    """Entry flips needed to make D perfectly dominant under a ranking (binary D only)."""
    if D.weighted:
        raise ValueError("k is defined for unweighted (0/1) matrices; binarize with generators.unweighted")
    d = D.entries
    n = D.n
    cost = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                cost[i][j] = int(d[i][j] == 0) + int(d[j][i] == 1)
    return CostProblem(tuple(map(tuple, cost)), MINIMIZE)


PROBLEMS = {"lop": lop_problem, "hillside": hillside_problem, "k": k_problem}


def _integer_costs(p: CostProblem):
    """Scale to integers and flip sign for minimization; returns (costs, scale)."""
    scale = 1
    for row in p.cost:
        for x in row:
            scale = math.lcm(scale, x.denominator)
    sign = 1 if p.sense == MAXIMIZE else -1
    c = [[sign * int(x * scale) for x in row] for row in p.cost]
    return c, scale


def _loss_table(c):
    n = len(c)
    return [[max(0, c[w][v] - c[v][w]) if v != w else 0 for w in range(n)] for v in range(n)]


def _insertion_ok(loss, prefix, v) -> bool:
    """False if moving ``v`` in front of some suffix of ``prefix`` strictly reduces loss."""
    delta = 0
    lv = loss[v]
    for u in reversed(prefix):
        delta += lv[u] - loss[u][v]
        if delta < 0:
            return False
    return True


def _extend(loss, prefix, acc, v, remaining):
    """Loss after appending ``v``, or None if moving ``v`` earlier strictly helps."""
    if not _insertion_ok(loss, prefix, v):
        return None
    lv = loss[v]
    return acc + sum(lv[w] for w in remaining if w != v)


def _min_loss(loss, n) -> int:
    """Best-first branch and bound on accumulated loss."""
    counter = 0
    heap = [(0, 0, counter, ())]
    everything = frozenset(range(n))
    while heap:
        acc, negdepth, _, prefix = heapq.heappop(heap)
        if -negdepth == n:
            return acc
        remaining = sorted(everything.difference(prefix))
        for v in remaining:
            nxt = _extend(loss, prefix, acc, v, remaining)
            if nxt is None:
                continue
            counter += 1
            heapq.heappush(heap, (nxt, negdepth - 1, counter, prefix + (v,)))
    raise AssertionError("search space exhausted without a leaf")


def _collect(loss, target, prefix, acc, remaining, row, cap, out):
    """Depth-first, lexicographic collection of rankings with loss == target.

    ``row[v]`` is the loss ``v`` would incur against everything still in
    ``remaining``, kept up to date as items are placed.
    """
    if not remaining:
        out.append(prefix)
        return
    for v in remaining:
        nxt = acc + row[v]
        if nxt > target or not _insertion_ok(loss, prefix, v):
            continue
        rest = [w for w in remaining if w != v]
        sub = row[:]
        for u in rest:
            sub[u] -= loss[u][v]
        _collect(loss, target, prefix + (v,), nxt, rest, sub, cap, out)
        if len(out) >= cap:
            return


def _row_sums(loss):
    return [sum(r) for r in loss]


def _collect_subtree(args):
    loss, n, target, first, cap = args
    out = []
    row = _row_sums(loss)
    if row[first] <= target:
        rest = [w for w in range(n) if w != first]
        sub = row[:]
        for u in rest:
            sub[u] -= loss[u][first]
        _collect(loss, target, (first,), row[first], rest, sub, cap, out)
    return out


def solve_enumerate(p: CostProblem, cap: int = DEFAULT_CAP, workers: int = 1) -> OptimalSet:
    """Exact optimum of ``p`` and its optimal rankings (all of them, or the first ``cap``).

    ``workers > 1`` splits the enumeration across processes by top-ranked
    item; the result does not depend on it.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    n = p.n
    c, scale = _integer_costs(p)
    loss = _loss_table(c)
    upper = sum(max(c[i][j], c[j][i]) for i in range(n) for j in range(i + 1, n))
    target = _min_loss(loss, n)

    # one extra ranking tells whether the cap truncated the set
    limit = cap + 1
    if workers > 1 and n > 1:
        jobs = [(loss, n, target, v, limit) for v in range(n)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_collect_subtree, jobs))
        found = [r for part in parts for r in part]
    else:
        found = []
        _collect(loss, target, (), 0, list(range(n)), _row_sums(loss), limit, found)
    complete = len(found) <= cap
    found = found[:cap]

    best = Fraction(upper - target, scale)
    objective = best if p.sense == MAXIMIZE else -best
    return OptimalSet(objective, p.sense, tuple(Ranking(r) for r in found), complete, cap)
