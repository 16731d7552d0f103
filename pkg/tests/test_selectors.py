import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levselect.errors import InfeasibleThreshold, NotOrthonormal
from levselect.leverage import LeverageProfile, leverage_scores
from levselect.matrix_core import svd
from levselect.selectors import (
    APPROX_BASIS,
    select_deterministic,
    select_pivoted_qr,
    select_randomized,
    select_top,
    select_with_basis,
    stopping_count,
    theta_from_epsilon,
)
from levselect.evaluation import lemma1_certificate
from levselect.sketch import frequent_directions_basis


def prof(scores, k):
    return LeverageProfile.from_scores(np.asarray(scores, dtype=float), k)


def test_two_unit_scores():
    sel = select_deterministic(prof([1, 1, 0], 2), 1.5)
    assert sel.indices == (0, 1) and sel.c == 2 and sel.mass == 2.0
    assert not sel.forced


def test_uniform_scores_need_all_columns():
    sel = select_deterministic(prof([0.2] * 10, 2), 1.9)
    assert sel.c == 10


def test_forced_to_k():
    # the prefix 0.9 already exceeds 0.8, so c = 1 < k = 2 and is forced up
    sel = select_deterministic(prof([0.9, 0.5, 0.3, 0.3], 2), 0.8)
    assert sel.c == 2 and sel.forced
    assert sel.indices == (0, 1)


def test_fast_decay_profile_boundary():
    # k=2, eps=1/4: l1 = k - 2k eps = 1, l2..l4 = eps, tail eps/(n-2k); the
    # top-2k prefix equals k - eps exactly, so "more than theta" needs one
    # more column; any theta just below the boundary stops at 2k
    k, eps, n = 2, 0.25, 12
    s = [k - 2 * k * eps] + [eps] * (2 * k - 1) + [eps / (n - 2 * k)] * (n - 2 * k)
    p = prof(s, k)
    assert np.sum(p.sorted_scores[: 2 * k]) == k - eps
    assert select_deterministic(p, theta_from_epsilon(k, eps)).c == 2 * k + 1
    assert select_deterministic(p, k - eps - 1e-9).c == 2 * k


@pytest.mark.parametrize("theta", [2.0, 2.5, 0.0, -1.0])
def test_infeasible_theta(theta):
    with pytest.raises(InfeasibleThreshold):
        select_deterministic(prof([1, 1, 0], 2), theta)


def test_stopping_count_matches_loop(rng):
    for _ in range(50):
        s = np.sort(rng.uniform(0, 1, 20))[::-1]
        theta = rng.uniform(0, s.sum())
        total, c = 0.0, None
        for i, v in enumerate(s, start=1):
            total += v
            if total > theta:
                c = i
                break
        assert stopping_count(s, theta) == c


@settings(max_examples=60, deadline=None)
@given(n=st.integers(3, 40), k=st.integers(1, 5), eps=st.floats(0.01, 0.99), seed=st.integers(0, 10 ** 6))
def test_deterministic_invariants(n, k, eps, seed):
    k = min(k, n - 1)
    q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, k)))
    p = leverage_scores(q, k)
    sel = select_deterministic(p, k - eps)
    assert sel.c >= k
    assert list(sel.indices) == list(p.order[: sel.c])
    assert sel.mass == pytest.approx(p.scores[list(sel.indices)].sum(), abs=1e-10)
    if not sel.forced:
        assert sel.mass > k - eps
        # minimality: dropping the last column falls to theta or below
        assert p.sorted_scores[: sel.c - 1].sum() <= k - eps or sel.c == k


def test_select_top():
    sel = select_top(prof([0.1, 0.7, 0.6, 0.6], 2), 3)
    assert sel.indices == (1, 2, 3)
    with pytest.raises(ValueError):
        select_top(prof([1, 1], 2), 3)


def test_randomized_excludes_zero_scores():
    sel = select_randomized(prof([1, 1, 0, 0], 2), 50, seed=3)
    assert set(sel.indices) <= {0, 1}


def test_randomized_frequencies():
    sel = select_randomized(prof([0.2] * 10, 2), 1000, seed=11)
    freq = np.bincount(sel.indices, minlength=10) / 1000
    assert np.all(np.abs(freq - 0.1) <= 0.05)


def test_randomized_deterministic_given_seed():
    p = prof([0.5, 0.5, 0.4, 0.3, 0.3], 2)
    assert select_randomized(p, 7, 99) == select_randomized(p, 7, 99)
    assert select_randomized(p, 7, 99).indices != select_randomized(p, 7, 100).indices


def test_randomized_mass_counts_repeats():
    sel = select_randomized(prof([1, 1, 0], 2), 5, seed=0)
    assert sel.mass == pytest.approx(5.0)
    assert len(sel.unique_indices()) <= 2


def test_pivoted_qr_examples(rng):
    sel = select_pivoted_qr(np.diag([1.0, 2.0, 3.0]), 2)
    assert [i + 1 for i in sel.indices] == [3, 2]
    a = rng.standard_normal((5, 4))
    full = select_pivoted_qr(a, 4)
    assert sorted(full.indices) == [0, 1, 2, 3]


def test_pivoted_qr_skips_duplicate():
    big = np.array([3.0, 4.0, 0.0])
    a = np.column_stack([big, big, [0.0, 0.0, 1.0]])
    sel = select_pivoted_qr(a, 2)
    assert sel.indices == (0, 2)


def test_with_basis_exact_equals_deterministic(rng):
    a = rng.standard_normal((10, 15))
    v = svd(a).v[:, :3]
    sel = select_with_basis(a, v, 3, 2.5)
    ref = select_deterministic(leverage_scores(v, 3), 2.5)
    assert sel.indices == ref.indices and sel.method == APPROX_BASIS


def test_with_basis_rotation_invariant(rng):
    a = rng.standard_normal((10, 15))
    v = svd(a).v[:, :3]
    r, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    assert select_with_basis(a, v @ r, 3, 2.5).indices == select_with_basis(a, v, 3, 2.5).indices


def test_with_basis_frequent_directions_certificate(rng):
    k, eps = 3, 0.3
    a = rng.standard_normal((40, k)) @ rng.standard_normal((k, 25))
    z = frequent_directions_basis(a, k, 0.5).z
    sel = select_with_basis(a, z, k, k - eps)
    assert lemma1_certificate(z, sel) > 1 - eps
    assert lemma1_certificate(svd(a).v[:, :k], sel) > 1 - eps


def test_with_basis_rejects_non_orthonormal():
    with pytest.raises(NotOrthonormal):
        select_with_basis(None, np.ones((4, 2)), 2, 1.5)
