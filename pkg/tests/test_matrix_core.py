import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from levselect.errors import ZeroMatrix
from levselect.matrix_core import (
    as_matrix,
    best_rank_k_errors,
    orthonormal_basis,
    pivoted_qr,
    projection_residual,
    spectral_norm,
    svd,
)


def test_svd_diagonal():
    f = svd(np.diag([3.0, 2.0, 1.0]))
    np.testing.assert_allclose(f.sigma, [3, 2, 1])
    np.testing.assert_allclose(np.abs(f.u), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(np.abs(f.v), np.eye(3), atol=1e-15)


def test_svd_identity():
    np.testing.assert_allclose(svd(np.eye(4)).sigma, np.ones(4))


def test_svd_reconstruction(rng):
    a = rng.standard_normal((5, 3))
    f = svd(a)
    err = np.linalg.norm(a - (f.u * f.sigma) @ f.v[:, :f.rank].T)
    assert err / f.sigma[0] <= 1e-10
    assert np.all(np.diff(f.sigma) <= 0) and np.all(f.sigma > 0)


def test_svd_zero_matrix():
    with pytest.raises(ZeroMatrix):
        svd(np.zeros((3, 2)))


def test_svd_rank_deficient_drops_zero_sigma(rng):
    b = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 5))
    f = svd(b)
    assert f.rank == 2
    assert len(f.sigma) == 2


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])


@pytest.mark.parametrize("sigma,k,expected", [
    ([3, 2, 1], 2, (1.0, 1.0)),
    ([3, 2, 1], 3, (0.0, 0.0)),
    ([5, 4, 3, 2], 1, (4.0, np.sqrt(29.0))),
])
def test_best_rank_k_errors(sigma, k, expected):
    f = svd(np.diag(np.asarray(sigma, dtype=float)))
    got = best_rank_k_errors(f, k)
    assert got == pytest.approx(expected, abs=1e-14)


def test_pivoted_qr_duplicate_column():
    a = np.array([[3.0, 1.0, 3.0], [0.0, 1.0, 0.0], [4.0, 0.0, 4.0]])
    q, r, perm = pivoted_qr(a)
    # columns 0 and 2 tie; the first index wins and its duplicate ends last
    assert perm[0] == 0 and perm[-1] == 2
    assert abs(r[2, 2]) < 1e-12


def test_pivoted_qr_reconstruction(rng):
    a = rng.standard_normal((6, 4))
    q, r, perm = pivoted_qr(a)
    assert np.linalg.norm(a[:, perm] - q @ r) <= 1e-10 * np.linalg.norm(a)


def test_pivoted_qr_zero_matrix():
    with pytest.raises(ZeroMatrix):
        pivoted_qr(np.zeros((2, 2)))


def test_spectral_norm_examples(rng):
    assert spectral_norm(np.diag([3.0, 2.0, 1.0])) == pytest.approx(3.0, rel=1e-12)
    assert spectral_norm(np.zeros((3, 4))) == 0.0
    a = rng.standard_normal((8, 5))
    assert spectral_norm(a) == pytest.approx(svd(a).sigma[0], rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 9), st.integers(1, 9)),
              elements=st.floats(-5, 5, allow_nan=False, allow_infinity=False)))
def test_spectral_norm_matches_lapack(a):
    ref = np.linalg.norm(a, 2)
    assert spectral_norm(a) == pytest.approx(ref, rel=1e-8, abs=1e-12)


def test_projection_residual_examples(rng):
    a = rng.standard_normal((4, 6))
    np.testing.assert_allclose(projection_residual(a, a), 0, atol=1e-12)
    res = projection_residual(np.eye(3), np.eye(3)[:, :1])
    np.testing.assert_allclose(res, np.diag([0.0, 1.0, 1.0]), atol=1e-15)
    np.testing.assert_array_equal(projection_residual(a, np.zeros((4, 2))), a)


def test_projection_residual_duplicates_do_not_matter(rng):
    a = rng.standard_normal((7, 9))
    c = a[:, [1, 4]]
    dup = a[:, [1, 4, 1, 4, 4]]
    np.testing.assert_allclose(projection_residual(a, dup), projection_residual(a, c), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), m=st.integers(2, 10), n=st.integers(2, 10),
       c=st.integers(1, 10))
def test_projection_residual_matches_pinv(seed, m, n, c):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n))
    cols = rng.integers(0, n, size=c)
    cm = a[:, cols]
    ref = a - cm @ np.linalg.pinv(cm) @ a
    np.testing.assert_allclose(projection_residual(a, cm), ref, atol=1e-9)


def test_orthonormal_basis_drops_dependent(rng):
    x = rng.standard_normal((6, 2))
    c = np.column_stack([x, x @ [1.0, 2.0]])
    q = orthonormal_basis(c)
    assert q.shape == (6, 2)
    np.testing.assert_allclose(q.T @ q, np.eye(2), atol=1e-12)
