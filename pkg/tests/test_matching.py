import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cnmbi.density import CenterSet
from cnmbi.harness import brute_force_matching
from cnmbi.matching import (
    CostMatrix,
    build_cost_matrix,
    matching_loss,
    min_cost_matching,
    pairwise_sq_costs,
    solve_assignment,
)


def test_cost_matrix_by_hand():
    c = build_cost_matrix(CenterSet([[0, 0], [1, 0]], "mean"), CenterSet([[0, 0], [0, 1]], "density"))
    np.testing.assert_array_equal(c.costs, [[0, 1], [1, 2]])
    single = build_cost_matrix(CenterSet([[2, 3]], "mean"), CenterSet([[2, 3]], "density"))
    np.testing.assert_array_equal(single.costs, [[0]])


def test_cost_matrix_kind_and_shape_checks():
    with pytest.raises(ValueError):
        build_cost_matrix(CenterSet([[0, 0]], "density"), CenterSet([[0, 0]], "mean"))
    with pytest.raises(ValueError):
        pairwise_sq_costs(np.zeros((2, 2)), np.zeros((3, 2)))


def test_cost_matrix_transpose_symmetry(rng):
    a, b = rng.normal(size=(2, 3, 4))
    np.testing.assert_allclose(pairwise_sq_costs(a, b).costs, pairwise_sq_costs(b, a).costs.T)


def test_tie_prefers_identity():
    res = min_cost_matching(CostMatrix(np.array([[0.0, 1.0], [1.0, 2.0]])))
    assert res.assignment.tolist() == [0, 1] and res.loss == 1.0


def test_zero_diagonal():
    res = min_cost_matching(np.array([[0.0, 9.0], [9.0, 0.0]]))
    assert res.assignment.tolist() == [0, 1] and res.loss == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_six_by_six_matches_enumeration(seed):
    c = np.random.default_rng(seed).random((6, 6)) * 100
    best = min(math.fsum(c[i, p[i]] for i in range(6)) / 6 for p in itertools.permutations(range(6)))
    res = min_cost_matching(c)
    assert res.loss == best
    assert res.assignment.tolist() == brute_force_matching(c).assignment.tolist()


def test_integer_ties_canonical(rng):
    for k in range(2, 8):
        for _ in range(30):
            c = rng.integers(0, 3, size=(k, k)).astype(float)
            ours, ref = min_cost_matching(c), brute_force_matching(c)
            assert ours.assignment.tolist() == ref.assignment.tolist()


def test_large_k_is_optimal(rng):
    from scipy.optimize import linear_sum_assignment

    c = rng.random((25, 25))
    r, s = linear_sum_assignment(c)
    assert min_cost_matching(c).loss == pytest.approx(c[r, s].mean(), rel=1e-12)


def test_loss_is_mean_of_pair_costs(rng):
    c = rng.random((5, 5))
    res = min_cost_matching(c)
    assert res.loss == math.fsum(res.pair_costs) / 5
    np.testing.assert_array_equal(res.pair_costs, c[np.arange(5), res.assignment])


def test_permuting_rows_and_columns(rng):
    c = rng.random((7, 7))
    base = min_cost_matching(c).loss
    pr, pc = rng.permutation(7), rng.permutation(7)
    assert min_cost_matching(c[pr][:, pc]).loss == pytest.approx(base, rel=1e-12)


def test_row_shift_keeps_argmin(rng):
    c = rng.random((6, 6))
    shifted = c + rng.random(6)[:, None] * 4
    assert min_cost_matching(shifted).assignment.tolist() == min_cost_matching(c).assignment.tolist()


def test_zero_loss_iff_same_multiset(rng):
    pts = rng.normal(size=(5, 2))
    same = pairwise_sq_costs(pts, pts[rng.permutation(5)])
    assert min_cost_matching(same).loss == 0.0
    other = pts.copy()
    other[0] += 1e-3
    assert min_cost_matching(pairwise_sq_costs(pts, other)).loss > 0.0


@pytest.mark.parametrize("bad", [np.array([[np.nan, 1.0], [1.0, 0.0]]), np.array([[np.inf, 1.0], [1.0, 0.0]]), np.zeros((2, 3))])
def test_rejects_bad_costs(bad):
    with pytest.raises(ValueError):
        min_cost_matching(bad)


def test_raw_solver_is_a_permutation(rng):
    perm = solve_assignment(rng.random((9, 9)))
    assert sorted(perm.tolist()) == list(range(9))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.integers(1, 6).map(lambda k: (k, k)), elements=st.floats(0, 1e4)))
def test_optimal_against_enumeration(c):
    ref = brute_force_matching(c)
    ours = min_cost_matching(c)
    assert ours.loss == ref.loss
    assert matching_loss(c, ours.assignment) == ours.loss
