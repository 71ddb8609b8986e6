import json

import pytest
from hypothesis import given, strategies as st

from reidemeister.errors import NotInvertible, UsageError
from reidemeister.matrices import (IntMatrix, ModMatrix, det, inverse, mat_mul, parse_matrix, reduce_mod, trace,
                                   transpose)


def B(k):
    return IntMatrix([[1, 0], [k, 1]])


def C(k):
    return IntMatrix([[k * k + 1, k], [k, 1]])


def A3(k):
    return IntMatrix([[1, 0, 0], [k, 1, 0], [0, 0, 1]])


def square(n, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n).map(IntMatrix)


sizes = st.integers(1, 4)
pairs = sizes.flatmap(lambda n: st.tuples(square(n), square(n)))


def test_mat_mul_examples():
    assert mat_mul(B(2), B(3)) == B(5)
    x = IntMatrix([[3, -1, 4], [1, 5, -9], [2, 6, 5]])
    assert IntMatrix.identity(3) @ x == x
    # hand multiplication: [[5,2],[2,1]]^2 = [[29,12],[12,5]]
    assert mat_mul(C(2).mod(5), C(2).mod(5)) == ModMatrix([[4, 2], [2, 0]], 5)


def test_mismatch_is_usage_error():
    with pytest.raises(UsageError):
        IntMatrix.identity(2) @ IntMatrix.identity(3)
    with pytest.raises(UsageError):
        ModMatrix.identity(2, 3) @ ModMatrix.identity(2, 5)
    with pytest.raises(UsageError):
        IntMatrix([[1, 2], [3]])


def test_transpose_examples():
    assert transpose(IntMatrix([[1, 0], [2, 1]])) == IntMatrix([[1, 2], [0, 1]])
    d = IntMatrix.diag(1, 1, -1)
    assert transpose(d) == d
    assert transpose(transpose(C(7))) == C(7)


def test_det_examples():
    assert all(det(C(k)) == 1 for k in range(1, 101))
    assert det(IntMatrix.diag(1, 1, 1, -1)) == -1
    assert det(A3(3)) == 1
    assert det(IntMatrix([[2, 0], [0, 3]]).mod(5)) == 1


def test_inverse_examples():
    assert inverse(B(4)) == B(-4)
    assert inverse(IntMatrix.identity(3)) == IntMatrix.identity(3)
    assert inverse(ModMatrix([[2, 1], [1, 1]], 5)) == ModMatrix([[1, 4], [4, 2]], 5)


def test_not_invertible_carries_det():
    with pytest.raises(NotInvertible) as info:
        IntMatrix([[2, 0], [0, 1]]).inverse()
    assert info.value.det == 2
    with pytest.raises(NotInvertible) as info:
        ModMatrix([[2, 0], [0, 1]], 4).inverse()
    assert info.value.det == 2


def test_trace_examples():
    X3 = IntMatrix([[5 * 5 + 1, 5, 0], [5, 1, 0], [0, 0, 1]])
    assert trace(X3) == 5 * 5 + 3
    assert trace(IntMatrix.identity(4)) == 4
    assert trace(A3(9)) == 3


def test_reduce_examples():
    assert reduce_mod(A3(5), 5) == ModMatrix.identity(3, 5)
    assert reduce_mod(-IntMatrix.identity(2), 2) == ModMatrix.identity(2, 2)
    assert reduce_mod(C(3), 7) == ModMatrix([[3, 3], [3, 1]], 7)
    with pytest.raises(UsageError):
        reduce_mod(C(3), 1)


def test_canonical_residues():
    x = ModMatrix([[-1, 12], [7, -20]], 6)
    assert x.rows == ((5, 0), (1, 4))
    assert x == ModMatrix([[5, 0], [1, 4]], 6)
    assert hash(x) == hash(ModMatrix([[5, 0], [1, 4]], 6))


def test_big_integers_do_not_wrap():
    k = 10**30
    assert det(C(k)) == 1
    assert (C(k) @ C(k).inverse()) == IntMatrix.identity(2)


@given(pairs, st.integers(2, 30))
def test_reduction_is_multiplicative(ab, m):
    a, b = ab
    assert reduce_mod(a @ b, m) == reduce_mod(a, m) @ reduce_mod(b, m)
    assert reduce_mod(a.T, m) == reduce_mod(a, m).T
    assert reduce_mod(a, m).trace() == a.trace() % m
    assert reduce_mod(a, m).det() == a.det() % m


@given(pairs)
def test_det_multiplicative(ab):
    a, b = ab
    assert det(a @ b) == det(a) * det(b)


@given(pairs)
def test_transpose_antihomomorphism(ab):
    a, b = ab
    assert (a @ b).T == b.T @ a.T


def unimodular(n):
    # words in elementary matrices
    step = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-3, 3))
    def build(steps):
        x = IntMatrix.identity(n)
        for i, j, c in steps:
            if i != j:
                x = (IntMatrix.identity(n) + c * IntMatrix.unit(n, i, j)) @ x
        return x
    return st.lists(step, max_size=10).map(build)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(unimodular(n), square(n))))
def test_inverse_and_similarity(ga):
    g, a = ga
    gi = g.inverse()
    assert g @ gi == IntMatrix.identity(g.n) == gi @ g
    assert (g @ a @ gi).trace() == a.trace()


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(unimodular(n), st.integers(2, 12))))
def test_mod_inverse(gm):
    g, m = gm
    x = g.mod(m)
    assert x @ x.inverse() == ModMatrix.identity(g.n, m)


def test_parse_json_and_text():
    assert parse_matrix(json.dumps({"n": 2, "entries": [[1, 2], [3, 4]]})) == IntMatrix([[1, 2], [3, 4]])
    assert parse_matrix("2\n1 2\n3   4\n") == IntMatrix([[1, 2], [3, 4]])


@pytest.mark.parametrize("text", [
    '{"n": 2, "entries": [[1, 2], [3]]}',
    '{"n": 3, "entries": [[1, 2], [3, 4]]}',
    "2\n1 2\n3\n",
    "2\n1 2 3\n4 5 6\n",
    '{"n": 2, "entries": [[1, 2.5], [3, 4]]}',
    "",
])
def test_parse_rejects_ragged(text):
    with pytest.raises(UsageError):
        parse_matrix(text)
