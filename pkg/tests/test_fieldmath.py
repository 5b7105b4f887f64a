import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qltc import fieldmath as fm


@st.composite
def matrices_(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    rows = draw(st.integers(1, 5))
    cols = draw(st.integers(1, 5))
    data = draw(
        st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols)
    )
    return np.array(data, dtype=np.int64).reshape(rows, cols), p


matrices = matrices_()


def test_is_prime():
    assert [p for p in range(20) if fm.is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        fm.check_prime(4)


def test_inv_mod():
    for p in (2, 3, 5, 7):
        for a in range(1, p):
            assert (a * fm.inv_mod(a, p)) % p == 1


@given(matrices)
@settings(max_examples=200)
def test_rref_preserves_rowspace(mp):
    mat, p = mp
    r, pivots = fm.rref(mat, p)
    assert fm.rank(r, p) == len(pivots) == fm.rank(mat, p)
    # every rref row is a combination of original rows and vice versa
    for row in r:
        if row.any():
            assert fm.solve_left(mat, row, p) is not None
    for row in mat:
        assert fm.solve_left(r, row, p) is not None


@given(matrices)
@settings(max_examples=200)
def test_nullspaces_annihilate(mp):
    mat, p = mp
    ns = fm.right_nullspace(mat, p)
    assert ns.shape[0] == mat.shape[1] - fm.rank(mat, p)
    if ns.size:
        assert not np.any((mat @ ns.T) % p)
    lns = fm.left_nullspace(mat, p)
    if lns.size:
        assert not np.any((lns @ mat) % p)


@given(matrices, st.integers(0, 10**6))
@settings(max_examples=200)
def test_solve_left_roundtrip(mp, seed):
    mat, p = mp
    rng = np.random.default_rng(seed)
    c = rng.integers(p, size=mat.shape[0])
    target = (c @ mat) % p
    sol = fm.solve_left(mat, target, p)
    assert sol is not None
    assert np.array_equal((sol @ mat) % p, target)


def test_solve_left_inconsistent():
    mat = np.array([[1, 0]], dtype=np.int64)
    assert fm.solve_left(mat, np.array([0, 1]), 2) is None


@given(matrices, st.integers(0, 10**6))
@settings(max_examples=200)
def test_rowspace_membership(mp, seed):
    mat, p = mp
    rs = fm.RowSpace(mat, p)
    rng = np.random.default_rng(seed)
    c = rng.integers(p, size=mat.shape[0])
    v = (c @ mat) % p
    assert rs.contains(v)
    coef = rs.coefficients(v)
    assert np.array_equal((coef @ mat) % p, v)
    # batch agrees with scalar
    vs = np.vstack([v, rng.integers(p, size=mat.shape[1])])
    batch = rs.contains_batch(vs)
    assert batch[0]
    assert batch[1] == rs.contains(vs[1])
