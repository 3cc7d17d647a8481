from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import discordant_pairs
from rankkit.core import DominanceMatrix, Measures, OptimalSet, Ranking, kendall_tau, rank_vector


def perms(n):
    return st.permutations(list(range(n)))


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([0, 1, 2], [0, 1, 2], 0),
        ([0, 1, 2], [2, 1, 0], 3),
        ([0, 1, 2, 3], [1, 0, 3, 2], 2),
    ],
)
def test_kendall_tau_examples(a, b, expected):
    assert discordant_pairs(a, b) == expected
    assert kendall_tau(a, b) == expected
    assert kendall_tau(Ranking(tuple(a)), Ranking(tuple(b))) == expected


def test_kendall_tau_length_mismatch():
    with pytest.raises(ValueError):
        kendall_tau([0, 1], [0, 1, 2])


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(perms(n), perms(n), perms(n))))
def test_kendall_tau_is_a_metric(triple):
    a, b, c = triple
    n = len(a)
    assert kendall_tau(a, b) == discordant_pairs(a, b)
    assert (kendall_tau(a, b) == 0) == (a == b)
    assert kendall_tau(a, b) == kendall_tau(b, a)
    assert kendall_tau(a, c) <= kendall_tau(a, b) + kendall_tau(b, c)
    assert 0 <= kendall_tau(a, b) <= n * (n - 1) // 2


@pytest.mark.parametrize(
    "order, expected",
    [([0, 1, 2], [1, 2, 3]), ([2, 0, 1], [2, 3, 1]), ([1, 0], [2, 1])],
)
def test_rank_vector_examples(order, expected):
    assert rank_vector(order) == expected
    assert Ranking.from_rank_vector(expected).order == tuple(order)


@given(st.integers(1, 10).flatmap(perms))
def test_rank_vector_inverts_order(order):
    v = rank_vector(order)
    assert all(v[order[i]] == i + 1 for i in range(len(order)))


def test_ranking_rejects_non_permutation():
    with pytest.raises(ValueError):
        Ranking((0, 0, 1))
    with pytest.raises(ValueError):
        Ranking.from_rank_vector([1, 1, 2])


def test_dominance_matrix_invariants():
    D = DominanceMatrix([[0, "1/2"], [3, 0]], item_names=["a", "b"])
    assert D.n == 2 and D[0, 1] == Fraction(1, 2) and D.weighted
    assert not DominanceMatrix([[0, 1], [0, 0]]).weighted
    with pytest.raises(ValueError):
        DominanceMatrix([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        DominanceMatrix([[0, -1], [0, 0]])
    with pytest.raises(ValueError):
        DominanceMatrix([[0, 1]])
    with pytest.raises(ValueError):
        DominanceMatrix([[0]], item_names=["a", "b"])


def test_optimal_set_invariants():
    with pytest.raises(ValueError):
        OptimalSet(0, "maximize", (), True, 5)
    with pytest.raises(ValueError):
        OptimalSet(0, "maximize", ((1, 0), (0, 1)), True, 5)
    with pytest.raises(ValueError):
        OptimalSet(0, "maximize", ((0, 1),), False, 5)
    s = OptimalSet(0, "maximize", ((0, 1),), False, 1)
    assert len(s) == 1 and s.n == 2


def test_measures_unique_optimum_invariant():
    Measures(k=0, p=1, tau=0, beta=Fraction(0))
    with pytest.raises(ValueError):
        Measures(k=0, p=1, tau=1, beta=Fraction(0))
    with pytest.raises(ValueError):
        Measures(k=0, p=2, tau=1, beta=Fraction(3, 2))
