import itertools

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from cladder import field_linalg as fl


def matrices(p, max_side=4):
    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda rc: st.lists(st.integers(0, p - 1), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(rc)
        )
    )


def brute_rank(a, p):
    """log_p of the number of distinct vectors in the row space."""
    span = {tuple(np.mod(np.array(c) @ a, p)) for c in itertools.product(range(p), repeat=a.shape[0])}
    r = 0
    while p ** r < len(span):
        r += 1
    return r


@pytest.mark.parametrize("p", [2, 3, 5])
@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_rank_matches_row_space_count(p, data):
    a = data.draw(matrices(p))
    assert fl.rank(a, p) == brute_rank(a, p)


@given(matrices(3))
@settings(max_examples=80, deadline=None)
def test_kernel_basis_is_a_basis_of_the_null_space(a):
    K = fl.kernel_basis(a, 3)
    assert fl.is_zero(fl.mul(a, K, 3))
    assert K.shape[1] == a.shape[1] - fl.rank(a, 3)
    assert fl.rank(K, 3) == K.shape[1]


@given(matrices(5))
@settings(max_examples=80, deadline=None)
def test_solve_recovers_a_consistent_rhs(a):
    x0 = np.arange(a.shape[1]) % 5
    b = fl.mul(a, x0.reshape(-1, 1), 5)
    x = fl.solve(a, b, 5)
    assert np.array_equal(fl.mul(a, x, 5), b)


def test_solve_rejects_inconsistent_system():
    a = np.array([[1, 0], [1, 0]])
    with pytest.raises(fl.InconsistentSystem):
        fl.solve(a, np.array([1, 0]), 2)


@given(matrices(2))
@settings(max_examples=80, deadline=None)
def test_cokernel_projection_kills_the_image(a):
    proj, sec = fl.cokernel_projection(a, 2)
    assert fl.is_zero(fl.mul(proj, a, 2))
    assert proj.shape[0] == a.shape[0] - fl.rank(a, 2)
    assert np.array_equal(fl.mul(proj, sec, 2), fl.identity(proj.shape[0]))


@pytest.mark.parametrize("p", [2, 7])
def test_inverse_roundtrip(p):
    rng = np.random.default_rng(p)
    for _ in range(20):
        a = rng.integers(0, p, size=(4, 4))
        if fl.rank(a, p) < 4:
            with pytest.raises(fl.InconsistentSystem):
                fl.inverse(a, p)
            continue
        assert np.array_equal(fl.mul(a, fl.inverse(a, p), p), fl.identity(4))


def test_empty_shapes():
    assert fl.rank(fl.zeros(0, 3)) == 0
    assert fl.kernel_basis(fl.zeros(0, 3)).shape == (3, 3)
    assert fl.image_basis(fl.zeros(2, 0)).shape == (2, 0)


def test_bad_prime_rejected():
    with pytest.raises(ValueError):
        fl.rref(np.eye(2, dtype=np.int64), 1)
