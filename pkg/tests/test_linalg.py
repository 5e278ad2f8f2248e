import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, strategies as st
from sympy import GF as SymGF, QQ as SymQQ
from sympy.polys.matrices import DomainMatrix

from totref.linalg import GF101, QQ, Field, NoSolution, NotAComplex

F7 = Field(7)


def matrices(p, max_side=6):
    hi = p - 1 if p else 4
    lo = 0 if p else -4
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def oracle_rank(rows, p):
    dom = SymGF(p) if p else SymQQ
    return DomainMatrix([[dom(x) for x in r] for r in rows], (len(rows), len(rows[0])), dom).rank()


@pytest.mark.parametrize("F", [GF101, F7, QQ], ids=str)
def test_rank_matches_sympy(F):
    rng = np.random.default_rng(3)
    for _ in range(20):
        r, c = rng.integers(1, 7, size=2)
        low = rng.integers(1, 4)
        m = F.matmul(F.random(r, low, rng), F.random(low, c, rng))
        rows = [[int(x) if F.p else x for x in row] for row in m]
        assert F.rank(m) == oracle_rank(rows, F.p)


@given(matrices(7))
def test_rank_nullity_gf7(rows):
    m = F7.asarray(rows)
    k = F7.kernel(m)
    assert F7.rank(m) + k.shape[1] == m.shape[1]
    assert F7.is_zero(F7.matmul(m, k))
    assert F7.rank(m) == oracle_rank(rows, 7)


@given(matrices(None, 5))
def test_rank_nullity_rationals(rows):
    m = QQ.asarray(rows)
    k = QQ.kernel(m)
    assert QQ.rank(m) + k.shape[1] == m.shape[1]
    assert QQ.is_zero(QQ.matmul(m, k))


@given(matrices(101), st.integers(0, 2**31))
def test_solve_consistent_rhs(rows, seed):
    m = GF101.asarray(rows)
    x0 = GF101.random(m.shape[1], 2, np.random.default_rng(seed))
    b = GF101.matmul(m, x0)
    x = GF101.solve(m, b)
    assert np.array_equal(GF101.matmul(m, x), b)


def test_solve_inconsistent_raises():
    m = GF101.asarray([[1, 0], [0, 0]])
    with pytest.raises(NoSolution):
        GF101.solve(m, GF101.vector([0, 1]))


def test_inverse_and_left_inverse():
    m = QQ.asarray([[2, 1], [1, 1]])
    assert np.array_equal(QQ.matmul(m, QQ.inverse(m)), QQ.eye(2))
    k = GF101.asarray([[1, 0], [3, 1], [5, 7]])
    assert np.array_equal(GF101.matmul(GF101.left_inverse(k), k), GF101.eye(2))
    with pytest.raises(NoSolution):
        QQ.inverse(QQ.asarray([[1, 2], [2, 4]]))


def test_rationals_stay_exact():
    m = QQ.asarray([[Fraction(1, 3), 1], [1, 3]])
    assert QQ.rank(m) == 1
    x = QQ.solve(QQ.asarray([[3, 0], [0, 7]]), QQ.vector([1, 1]))
    assert list(x) == [Fraction(1, 3), Fraction(1, 7)]


def test_large_products_do_not_lose_precision():
    # entries p-1 with a long inner dimension would overflow 2**53 without chunking
    n = 3000
    a = GF101.asarray(np.full((1, n), 100))
    b = GF101.asarray(np.full((n, 1), 100))
    assert int(GF101.matmul(a, b)[0, 0]) == (100 * 100 * n) % 101


def test_exactness_check():
    a = GF101.asarray([[1], [0]])
    b = GF101.asarray([[0, 1]])
    assert GF101.is_exact_at(a, b)
    assert not GF101.is_exact_at(GF101.zeros(2, 1), b)
    with pytest.raises(NotAComplex):
        GF101.is_exact_at(GF101.asarray([[1], [1]]), b)


def test_complement_is_lexicographically_first():
    sub = GF101.asarray([[1], [1], [0]])
    c = GF101.complement(sub)
    assert np.array_equal(c, GF101.eye(3)[:, [0, 2]])


def test_intersection():
    u = QQ.asarray([[1, 0], [0, 1], [0, 0]])
    w = QQ.asarray([[1, 0], [0, 0], [0, 1]])
    i = QQ.intersect(u, w)
    assert i.shape[1] == 1 and QQ.in_span(u, i) and QQ.in_span(w, i)


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field(12)


def test_rref_small_cases():
    assert GF101.rref(GF101.zeros(0, 0))[2] == 0
    _, piv, rank = GF101.rref(GF101.eye(3))
    assert (piv, rank) == ([0, 1, 2], 3)
    assert GF101.rank(GF101.asarray([[1, 2], [2, 4]])) == 1


def test_kernel_small_cases():
    assert GF101.kernel(GF101.eye(3)).shape[1] == 0
    assert GF101.kernel(GF101.zeros(2, 3)).shape[1] == 3
    k = GF101.kernel(GF101.asarray([[1, 1]]))
    assert k.shape[1] == 1 and int(GF101.reduce(k[0, 0] + k[1, 0])) == 0


def test_solve_small_cases():
    b = GF101.asarray([[4], [9]])
    assert np.array_equal(GF101.solve(GF101.eye(2), b), b)
    with pytest.raises(NoSolution):
        GF101.solve(GF101.zeros(2, 2), b)
    F5 = Field(5)
    assert int(F5.solve(F5.asarray([[2]]), F5.asarray([[1]]))[0, 0]) == 3


def test_exactness_small_cases():
    inj = GF101.eye(2)
    assert GF101.is_exact_at(GF101.zeros(2, 1), inj)
    assert GF101.is_exact_at(GF101.eye(2), GF101.zeros(1, 2))
    assert not GF101.is_exact_at(GF101.zeros(2, 1), GF101.zeros(1, 2))


@given(matrices(101))
def test_rank_of_transpose(rows):
    m = GF101.asarray(rows)
    assert GF101.rank(m) == GF101.rank(m.T)
