"""Brute-force reference computations, deliberately independent of the package."""

import itertools

import numpy as np


def all_perms(n):
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def lop_cost(D):
    return np.array(D, dtype=np.int64)


def hillside_cost(D):
    D = np.array(D, dtype=np.int64)
    # rows: D[i,k] < D[j,k]; columns: D[k,j] < D[k,i]
    rows = (D[:, None, :] < D[None, :, :]).sum(axis=2)
    cols = (D.T[None, :, :] < D.T[:, None, :]).sum(axis=2)
    C = rows + cols
    np.fill_diagonal(C, 0)
    return C


def k_cost(D):
    D = np.array(D, dtype=np.int64)
    C = (D == 0).astype(np.int64) + (D.T == 1).astype(np.int64)
    np.fill_diagonal(C, 0)
    return C


def brute_force(C, maximize):
    """(optimum, sorted list of optimal orders) by scoring every permutation."""
    C = np.asarray(C)
    n = C.shape[0]
    perms = all_perms(n)
    score = np.zeros(len(perms), dtype=C.dtype)
    for i in range(n):
        for j in range(i + 1, n):
            score += C[perms[:, i], perms[:, j]]
    best = score.max() if maximize else score.min()
    winners = sorted(tuple(int(x) for x in p) for p in perms[score == best])
    return int(best), winners


def discordant_pairs(a, b):
    pa = {x: i for i, x in enumerate(a)}
    pb = {x: i for i, x in enumerate(b)}
    items = sorted(pa)
    return sum(
        1
        for x, y in itertools.combinations(items, 2)
        if (pa[x] - pa[y]) * (pb[x] - pb[y]) < 0
    )


def centroid_scan(orders):
    """(closest, farthest) to the mean rank vector by exact squared distance; ties to the smaller order."""
    from fractions import Fraction

    m = len(orders)
    vecs = []
    for o in orders:
        v = [0] * len(o)
        for pos, item in enumerate(o):
            v[item] = pos + 1
        vecs.append(v)
    mean = [Fraction(sum(col), m) for col in zip(*vecs)]
    d = [sum((x - c) ** 2 for x, c in zip(v, mean)) for v in vecs]
    closest = min(range(m), key=lambda i: (d[i], orders[i]))
    farthest = min(range(m), key=lambda i: (-d[i], orders[i]))
    return orders[closest], orders[farthest], d
