import math

import numpy as np
import pytest

from swexp.dual import (
    combined_exponent,
    exponent_r_gallager,
    exponent_sp,
    exponent_tt_ex,
    exponent_tt_rc,
    matched_ex_tt,
)
from swexp.model import (
    DecodingMetric,
    conditional_entropy,
    hamming_metric,
    matched_metric,
    validate_source,
)
from swexp.primal import (
    bhattacharyya_distance,
    ck_ex_primal,
    ck_rc_primal,
    exponent_ex_primal,
    exponent_r_primal,
    exponent_sp_primal,
    verify_duality,
)

from conftest import binary_source, random_source


# independent numpy evaluations of the primal objectives

def _kl(p, q):
    p, q = np.ravel(p), np.ravel(q)
    m = p > 0
    return float(np.sum(p[m] * np.log(p[m] / q[m])))


def _h_cond(joint):
    """H(row | column) of a 2-D joint."""
    col = joint.sum(axis=0, keepdims=True)
    m = joint > 0
    return float(-np.sum(joint[m] * np.log((joint / np.where(col > 0, col, 1))[m])))


def _cube(V, X, Y):
    return V.reshape(X, X, Y)        # [xh, xt, y]


def ck_rc_objective(V, source, rate):
    X, Y = source.pmf.shape
    c = _cube(V, X, Y)
    return _kl(c.sum(axis=0), source.pmf) + max(rate - _h_cond(c.sum(axis=1)), 0.0)


def ck_ex_objective(V, source, rate):
    X, Y = source.pmf.shape
    c = _cube(V, X, Y)
    return _kl(c.sum(axis=0), source.pmf) + rate - _h_cond(c.reshape(X, X * Y))


def ck_constraints(V, source, metric):
    X, Y = source.pmf.shape
    c = _cube(V, X, Y)
    marg = np.abs(c.sum(axis=(1, 2)) - c.sum(axis=(0, 2))).max()
    L = metric.log_q
    score = 0.0
    for xh in range(X):
        for xt in range(X):
            for y in range(Y):
                if c[xh, xt, y] > 0:
                    score += c[xh, xt, y] * (L[xh, y] - L[xt, y])
    return marg, score


@pytest.fixture(scope="module")
def grid():
    return np.linspace(0.5, 1.0, 10)


def test_r_primal_zero_below_entropy(example_source):
    h = conditional_entropy(example_source)
    sol = exponent_r_primal(example_source, h - 0.02)
    assert sol.value < 1e-8
    np.testing.assert_allclose(sol.minimizer, example_source.pmf, atol=1e-4)


def test_r_primal_matches_gallager(example_source, grid):
    for r in grid:
        assert abs(exponent_r_primal(example_source, r).value - exponent_r_gallager(example_source, r).value) < 1e-6


def test_r_primal_independent_uniform():
    src = validate_source(np.full((2, 2), 0.25))
    for r in (0.3, 0.9):
        assert abs(exponent_r_primal(src, r).value - max(r - math.log(2), 0.0)) < 1e-7


def test_sp_primal(example_source):
    h = conditional_entropy(example_source)
    assert exponent_sp_primal(example_source, h).value < 1e-8
    bad = exponent_sp_primal(example_source, math.log(3) + 0.01)
    assert not bad.feasible and bad.value == math.inf
    for r in (0.7, 0.9, 1.05):
        assert abs(exponent_sp_primal(example_source, r).value - exponent_sp(example_source, r).value) < 5e-3


def test_bhattacharyya_diagonal_zero(example_source):
    d = bhattacharyya_distance(example_source)
    np.testing.assert_allclose(np.diag(d), 0.0, atol=1e-15)
    assert np.all(d >= -1e-15)


def test_ex_primal_matches_dual_random_2x2():
    rng = np.random.default_rng(21)
    for _ in range(3):
        src = random_source(rng, 2, 2)
        h = conditional_entropy(src)
        for r in np.linspace(h + 0.05, math.log(2) - 0.03, 3):
            p = exponent_ex_primal(src, r)
            d = matched_ex_tt(src, r)
            if d.value > 0:
                assert abs(max(p.value, 0.0) - d.value) < 5e-3


def test_ex_primal_identical_rows():
    # indistinguishable symbols: d = 0, and the best coupling is independent,
    # leaving min_Q D(Q||P_X) + R - H(Q) subject to H(Q) >= R
    px = np.array([0.7, 0.3])
    src = validate_source(np.outer(px, [0.4, 0.6]))
    np.testing.assert_allclose(bhattacharyya_distance(src), 0.0, atol=1e-15)
    r = 0.3
    q = np.linspace(1e-9, 1 - 1e-9, 200001)
    h = -(q * np.log(q) + (1 - q) * np.log(1 - q))
    d = q * np.log(q / px[0]) + (1 - q) * np.log((1 - q) / px[1])
    ref = np.min((d + r - h)[h >= r])
    assert abs(exponent_ex_primal(src, r).value - ref) < 1e-7


def test_ck_rc_matched_reduces(example_source):
    q = matched_metric(example_source)
    for r in (0.6, 0.8, 1.0):
        assert abs(ck_rc_primal(example_source, q, r).value - exponent_r_primal(example_source, r).value) < 5e-3


def test_ck_rc_rate_zero(example_source, ham01):
    assert ck_rc_primal(example_source, ham01, 0.0).value < 1e-8


def test_ck_ex_matched_reduces(example_source):
    q = matched_metric(example_source)
    for r in (0.8, 1.0):
        assert abs(ck_ex_primal(example_source, q, r).value - exponent_ex_primal(example_source, r).value) < 5e-3


def test_ck_ex_at_rate_zero(example_source, ham01):
    assert ck_ex_primal(example_source, ham01, 0.0).value <= ck_rc_primal(example_source, ham01, 0.0).value + 1e-6


def test_ck_minimizers_reproduce_values(example_source, ham01):
    for r in (0.6, 0.9):
        rc = ck_rc_primal(example_source, ham01, r)
        ex = ck_ex_primal(example_source, ham01, r)
        assert abs(ck_rc_objective(rc.minimizer, example_source, r) - rc.value) < 1e-9
        assert abs(ck_ex_objective(ex.minimizer, example_source, r) - ex.value) < 1e-9
        for sol in (rc, ex):
            assert np.all(sol.minimizer >= 0) and abs(sol.minimizer.sum() - 1) < 1e-12
            marg, score = ck_constraints(sol.minimizer, example_source, ham01)
            assert marg < 1e-8 and score > -1e-8
        assert set(rc.active) == {"metric", "hinge"}


def test_ck_matches_tt_branches(example_source, ham01):
    for r in (0.7, 0.9):
        assert abs(ck_rc_primal(example_source, ham01, r).value - exponent_tt_rc(example_source, ham01, r).value) < 5e-3
    for r in (0.85, 1.0):
        assert abs(ck_ex_primal(example_source, ham01, r).value - exponent_tt_ex(example_source, ham01, r).value) < 5e-3


def test_verify_duality_example(example_source, ham01, grid):
    rep = verify_duality(example_source, ham01, grid, tolerance=5e-3)
    assert rep.passed and rep.max_gap < 5e-3
    d = rep.as_dict()
    assert len(d["gaps"]) == 10


def test_verify_duality_point_mass():
    src = validate_source([[0.0, 0.0], [0.3, 0.7]])
    q = DecodingMetric([[0.5, 0.5], [0.5, 0.5]])
    # the random-coding sides are both linear in R
    for r in (0.1, 0.3):
        assert abs(ck_rc_primal(src, q, r).value - r) < 1e-6
        assert abs(exponent_tt_rc(src, q, r).value - r) < 1e-6
    # the expurgated primal is infeasible (+inf) and the dual runs into its caps
    rep = verify_duality(src, q, [0.1, 0.3])
    assert rep.passed and rep.max_gap == 0.0
    assert all(math.isinf(v) for v in rep.primal + rep.dual)


def test_verify_duality_matched_random_2x2():
    src = random_source(np.random.default_rng(5), 2, 2)
    rep = verify_duality(src, matched_metric(src), np.linspace(0.1, 0.65, 5))
    assert rep.passed


def test_gap_does_not_grow_with_tighter_solver(example_source, ham01):
    r = 0.8
    d = combined_exponent(example_source, ham01, r, "tt").value
    loose = abs(max(ck_rc_primal(example_source, ham01, r, tol=1e-5).value,
                    ck_ex_primal(example_source, ham01, r, tol=1e-5).value) - d)
    tight = abs(max(ck_rc_primal(example_source, ham01, r, tol=1e-10).value,
                    ck_ex_primal(example_source, ham01, r, tol=1e-10).value) - d)
    assert tight <= max(loose, 1e-8)


def test_binary_source_duality():
    src = binary_source(0.1, 0.4)
    rep = verify_duality(src, hamming_metric(2, 0.3), np.linspace(0.4, 0.65, 4))
    assert rep.passed
