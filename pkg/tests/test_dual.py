import math

import mpmath as mp
import numpy as np
import pytest

from swexp.dual import (
    FAMILIES,
    cc_ex_decomposition,
    combined_exponent,
    exponent_curve,
    exponent_no_si,
    exponent_no_si_optimal,
    exponent_r_gallager,
    exponent_sp,
    exponent_std_ex,
    exponent_std_rc,
    exponent_tt_ex,
    exponent_tt_rc,
    gallager_e0,
    matched_ex_std,
    matched_ex_tt,
    std_ex_objective,
    std_rc_objective,
    tilted_distributions,
    tt_ex_objective,
    tt_rc_objective,
    _ex_exponent,
)
from swexp.errors import IncompatibleMetric, SWError
from swexp.model import DecodingMetric, conditional_entropy, hamming_metric, matched_metric, validate_source
from swexp.rates import rate_std, rate_tt

from conftest import EXAMPLE_PMF, random_metric, random_source

mp.mp.dps = 40


# --------------------------------------------------------------------------
# high-precision oracles, written independently of the numpy code

def mp_e0(pmf, rho):
    P = [[mp.mpf(v) for v in row] for row in pmf]
    X, Y = len(P), len(P[0])
    tot = mp.mpf(0)
    for y in range(Y):
        py = mp.fsum(P[x][y] for x in range(X))
        if py == 0:
            continue
        inner = mp.fsum((P[x][y] / py) ** (1 / (1 + mp.mpf(rho))) for x in range(X) if P[x][y] > 0)
        tot += py * inner ** (1 + mp.mpf(rho))
    return mp.log(tot)


def mp_rc(pmf, q, rho, s, a=None):
    X, Y = len(pmf), len(pmf[0])
    a = [mp.mpf(0)] * X if a is None else [mp.mpf(v) for v in a]
    tot = mp.mpf(0)
    for x in range(X):
        for y in range(Y):
            if pmf[x][y] == 0:
                continue
            inner = mp.fsum(mp.e ** (a[xb] - a[x]) * (mp.mpf(q[xb][y]) / mp.mpf(q[x][y])) ** mp.mpf(s)
                            for xb in range(X))
            tot += mp.mpf(pmf[x][y]) * inner ** mp.mpf(rho)
    return mp.log(tot)


def mp_ex(pmf, q, rho, s, a=None):
    X, Y = len(pmf), len(pmf[0])
    a = [mp.mpf(0)] * X if a is None else [mp.mpf(v) for v in a]
    tot = mp.mpf(0)
    for x in range(X):
        if sum(pmf[x]) == 0:
            continue
        outer = mp.mpf(0)
        for xb in range(X):
            inner = mp.fsum(mp.mpf(pmf[x][y]) * mp.e ** (a[xb] - a[x])
                            * (mp.mpf(q[xb][y]) / mp.mpf(q[x][y])) ** mp.mpf(s)
                            for y in range(Y) if pmf[x][y] > 0)
            outer += inner ** (1 / mp.mpf(rho))
        tot += outer ** mp.mpf(rho)
    return mp.log(tot)


def _q(metric):
    return metric.q.tolist()


# --------------------------------------------------------------------------
# objectives

def test_e0_zero_and_point_mass(example_source):
    assert abs(gallager_e0(example_source, 0.0)) < 1e-15
    assert abs(gallager_e0(validate_source([[0.0, 0.0], [0.3, 0.7]]), 2.0)) < 1e-15


def test_e0_example_rho1(example_source):
    assert abs(gallager_e0(example_source, 1.0) - float(mp_e0(EXAMPLE_PMF, 1))) < 1e-13


def test_std_rc_objective_trivial_cases(example_source, ham01):
    assert abs(std_rc_objective(example_source, ham01, 0.7, 0.0) - 0.7 * math.log(3)) < 1e-13
    assert abs(std_rc_objective(example_source, ham01, 0.0, 0.9)) < 1e-15


def test_std_rc_objective_high_precision(example_source, ham01):
    ref = float(mp_rc(EXAMPLE_PMF, _q(ham01), 0.5, 0.5))
    assert abs(std_rc_objective(example_source, ham01, 0.5, 0.5) - ref) < 1e-13


def test_tt_rc_objective_high_precision(example_source, ham01):
    a = (0.1, -0.1, 0.0)
    ref = float(mp_rc(EXAMPLE_PMF, _q(ham01), 1.0, 1.0, a))
    assert abs(tt_rc_objective(example_source, ham01, 1.0, 1.0, a) - ref) < 1e-13


def test_ex_objectives_high_precision(example_source, ham01):
    a = (0.3, -0.2, 0.05)
    ref = float(mp_ex(EXAMPLE_PMF, _q(ham01), 3.0, 0.8, a))
    assert abs(tt_ex_objective(example_source, ham01, 3.0, 0.8, a) - ref) < 1e-13
    ref = float(mp_ex(EXAMPLE_PMF, _q(ham01), 2.0, 0.4))
    assert abs(std_ex_objective(example_source, ham01, 2.0, 0.4) - ref) < 1e-13


def test_std_ex_objective_trivial_cases(example_source, ham01):
    assert abs(std_ex_objective(example_source, ham01, 3.0, 0.0) - 3.0 * math.log(3)) < 1e-13
    pm = validate_source([[0.0, 0.0], [0.6, 0.4]])
    m = DecodingMetric([[0.5, 0.5], [0.5, 0.5]])
    for rho, s in ((1.0, 0.0), (4.0, 2.0)):
        # a single supported x means only the xb = x term survives... plus
        # the zero-probability row, which still enters the inner sum
        val = std_ex_objective(pm, m, rho, s)
        assert abs(val - float(mp_ex([[0, 0], [0.6, 0.4]], [[0.5, 0.5], [0.5, 0.5]], rho, s))) < 1e-13


def test_rho_one_identity():
    rng = np.random.default_rng(3)
    for _ in range(5):
        src, q = random_source(rng, 3, 3), random_metric(rng, 3, 3)
        a = rng.normal(size=3)
        assert abs(std_ex_objective(src, q, 1.0, 0.7) - std_rc_objective(src, q, 1.0, 0.7)) < 1e-12
        assert abs(tt_ex_objective(src, q, 1.0, 0.7, a) - tt_rc_objective(src, q, 1.0, 0.7, a)) < 1e-12


def test_zero_cost_reduces_to_standard(example_source, ham01):
    z = np.zeros(3)
    assert tt_rc_objective(example_source, ham01, 0.4, 0.6, z) == std_rc_objective(example_source, ham01, 0.4, 0.6)
    assert tt_ex_objective(example_source, ham01, 2.0, 0.6, z) == std_ex_objective(example_source, ham01, 2.0, 0.6)


def test_gauge_shift_c37(example_source, ham01):
    a = np.array([0.2, -0.5, 0.1])
    assert abs(tt_rc_objective(example_source, ham01, 0.6, 0.9, a + 3.7)
               - tt_rc_objective(example_source, ham01, 0.6, 0.9, a)) < 1e-12
    assert abs(tt_ex_objective(example_source, ham01, 2.6, 0.9, a + 3.7)
               - tt_ex_objective(example_source, ham01, 2.6, 0.9, a)) < 1e-12


def test_incompatible_metric_rejected(example_source):
    bad = DecodingMetric(np.eye(3))
    with pytest.raises(IncompatibleMetric):
        std_rc_objective(example_source, bad, 0.5, 0.5)
    with pytest.raises(IncompatibleMetric):
        exponent_tt_ex(example_source, bad, 0.8)


def test_parameter_checks(example_source, ham01):
    with pytest.raises(SWError):
        std_rc_objective(example_source, ham01, -0.1, 0.5)
    with pytest.raises(SWError):
        exponent_std_rc(example_source, ham01, -1.0)
    with pytest.raises(SWError):
        exponent_sp(example_source, 0.8, rho_cap=1.0)


# --------------------------------------------------------------------------
# Gallager-type exponents

def test_er_zero_below_conditional_entropy(example_source):
    h = conditional_entropy(example_source)
    p = exponent_r_gallager(example_source, h - 0.01)
    assert p.value == 0.0 and p.argmax.rho == 0.0


def test_er_point_mass():
    p = exponent_r_gallager(validate_source([[0.0], [1.0]]), 0.3)
    assert abs(p.value - 0.3) < 1e-12 and abs(p.argmax.rho - 1.0) < 1e-9


def test_sp_equals_er_below_critical_rate(example_source):
    h = conditional_entropy(example_source)
    d = 1e-6
    r_cr = (gallager_e0(example_source, 1 + d) - gallager_e0(example_source, 1 - d)) / (2 * d)
    for r in np.linspace(h + 0.01, r_cr - 0.01, 4):
        assert abs(exponent_sp(example_source, r).value - exponent_r_gallager(example_source, r).value) < 1e-9
    assert exponent_sp(example_source, h - 0.01).value == 0.0


def test_sp_saturates_above_log_support(example_source):
    p = exponent_sp(example_source, math.log(3) + 0.05)
    assert p.saturated_rho
    assert exponent_sp(example_source, math.log(3) + 0.05, rho_cap=128).value > p.value


# --------------------------------------------------------------------------
# mismatched exponents

def test_matched_recovery_std_and_tt(example_source):
    q = matched_metric(example_source)
    for r in (0.5, 0.7, 0.9, 1.05):
        er = exponent_r_gallager(example_source, r).value
        assert abs(exponent_std_rc(example_source, q, r).value - er) < 1e-6
        assert abs(exponent_tt_rc(example_source, q, r).value - er) < 1e-5


def test_tt_rc_recovers_er_for_tilted_matched_family(example_source):
    rng = np.random.default_rng(11)
    b, c, tau = rng.normal(size=3), rng.normal(size=3), 1.7
    q = DecodingMetric(np.exp(b[:, None] + c[None, :]) * matched_metric(example_source).q ** tau)
    for r in (0.6, 0.9):
        assert abs(exponent_tt_rc(example_source, q, r).value - exponent_r_gallager(example_source, r).value) < 1e-5


def test_std_zero_below_rate_threshold(example_source, ham01):
    h_std, _ = rate_std(example_source, ham01)
    h_tt, _, _ = rate_tt(example_source, ham01)
    assert exponent_std_rc(example_source, ham01, h_std - 1e-3).value == 0.0
    assert exponent_std_rc(example_source, ham01, h_std + 0.02).value > 0.0
    assert exponent_tt_rc(example_source, ham01, h_tt - 1e-3).value == 0.0
    assert exponent_tt_rc(example_source, ham01, h_tt + 0.02).value > 0.0


def test_power_invariance_tau2(example_source, ham01):
    q2 = ham01.power(1.0, 2.0)
    for r in (0.7, 0.9):
        assert abs(exponent_std_rc(example_source, q2, r).value - exponent_std_rc(example_source, ham01, r).value) < 1e-6


def test_expurgated_dominates_rc_at_rho1(example_source, ham01):
    for r in (0.8, 0.95):
        ex = exponent_std_ex(example_source, ham01, r)
        at_one = r - std_rc_objective(example_source, ham01, 1.0, ex.argmax.s)
        assert ex.value >= at_one - 1e-9


def test_point_mass_std_ex_saturates():
    src = validate_source([[0.0, 0.0], [0.4, 0.6]])
    q = DecodingMetric([[0.5, 0.5], [0.5, 0.5]])
    src1 = validate_source([[0.4, 0.6]])
    p = exponent_std_ex(src1, DecodingMetric([[1.0, 1.0]]), 0.2, rho_cap=16)
    assert p.saturated_rho and abs(p.value - 16 * 0.2) < 1e-9
    assert exponent_std_ex(src, q, 0.0).value == 0.0


def test_ordering_chains_example(example_source, ham01):
    for r in (0.7, 0.85, 1.0):
        assert exponent_std_rc(example_source, ham01, r).value <= exponent_tt_rc(example_source, ham01, r).value + 1e-6
        assert exponent_tt_rc(example_source, ham01, r).value <= exponent_r_gallager(example_source, r).value + 1e-6
        assert exponent_std_ex(example_source, ham01, r).value <= exponent_tt_ex(example_source, ham01, r).value + 1e-6
        assert exponent_tt_ex(example_source, ham01, r).value <= matched_ex_tt(example_source, r).value + 1e-6
        assert matched_ex_std(example_source, r).value <= matched_ex_tt(example_source, r).value + 1e-6


def test_matched_ex_tt_is_half_tilt(example_source):
    q = matched_metric(example_source)
    for r in (0.8, 1.0, 1.05):
        frozen = _ex_exponent(example_source, q, r, "x", True, 64.0, fixed_s=0.5).value
        assert abs(frozen - matched_ex_tt(example_source, r).value) < 1e-5
        # the free-s optimum lands at s = 1/2 as well
        assert abs(exponent_tt_ex(example_source, q, r).value - matched_ex_tt(example_source, r).value) < 1e-4


def test_matched_family_28(example_source):
    rng = np.random.default_rng(4)
    b, c = rng.normal(size=3), rng.normal(size=3)
    q = DecodingMetric(np.exp(b[:, None] + c[None, :]) * matched_metric(example_source).q ** 0.6)
    for r in (0.8, 1.0):
        assert abs(exponent_tt_ex(example_source, q, r).value - matched_ex_tt(example_source, r).value) < 1e-4


def test_no_side_information():
    px = np.array([0.6, 0.3, 0.1])
    for r in (0.9, 1.0):
        opt = exponent_no_si_optimal(px, r).value
        assert abs(exponent_no_si(px, px, r).value - opt) < 1e-6
        src = validate_source(px[:, None])
        for q in ([0.2, 0.5, 0.3], [1.0, 1.0, 1.0]):
            pt = combined_exponent(src, DecodingMetric(np.array(q)[:, None]), r, "tt")
            assert abs(pt.value - opt) < 1e-6


def test_no_si_expurgated_branch_where_rho_at_least_one():
    # the expurgated form alone only covers the part of the curve whose
    # optimal rho is at least one
    px = np.array([0.6, 0.3, 0.1])
    src = validate_source(px[:, None])
    for r in (1.05, 1.08):
        opt = exponent_no_si_optimal(px, r)
        assert opt.argmax.rho >= 1
        assert abs(matched_ex_tt(src, r).value - opt.value) < 1e-6
    low = exponent_no_si_optimal(px, 1.0)
    assert low.argmax.rho < 1 and matched_ex_tt(src, 1.0).value < low.value


def test_no_si_uniform_px():
    px = np.full(3, 1 / 3)
    assert exponent_no_si(px, [0.2, 0.3, 0.5], math.log(3)).value < 1e-9
    # uniform q: only the s = 0 branch rho*(R - log|X|) is available
    p = exponent_no_si([0.5, 0.3, 0.2], [1.0, 1.0, 1.0], 1.2, rho_cap=8)
    assert abs(p.value - 8 * (1.2 - math.log(3))) < 1e-9


def test_combined_branches(example_source, ham01):
    low = combined_exponent(example_source, ham01, 0.6, "tt")
    assert low.branch == "rc"
    high = combined_exponent(example_source, ham01, 1.05, "tt")
    assert high.branch == "ex"
    assert high.value > exponent_tt_rc(example_source, ham01, 1.05).value + 1e-3
    assert combined_exponent(example_source, ham01, 0.8, "standard").family == "std"
    with pytest.raises(SWError):
        combined_exponent(example_source, ham01, 0.8, "other")


def test_tilted_distributions(example_source, ham01):
    Q, Qt = tilted_distributions(example_source, ham01, 0.8)
    assert abs(Q.sum() - 1) < 1e-12 and abs(Qt.sum() - 1) < 1e-12
    assert abs(cc_ex_decomposition(example_source, ham01, 0.8) - exponent_tt_ex(example_source, ham01, 0.8).value) < 1e-3
    h = conditional_entropy(example_source)
    Q, _ = tilted_distributions(example_source, matched_metric(example_source), h)
    np.testing.assert_allclose(Q, example_source.px, atol=1e-6)


def test_curves_shape(example_source, ham01):
    grid = np.linspace(0.4, 1.05, 14)
    for fam in ("std_rc", "tt_rc", "std_ex", "tt_ex", "std", "tt", "r_gallager"):
        v = exponent_curve(example_source, ham01, grid, fam).values
        assert np.all(np.diff(v) >= -1e-6), fam
        assert np.all(v[:-2] - 2 * v[1:-1] + v[2:] >= -1e-6), fam
    with pytest.raises(SWError):
        exponent_curve(example_source, ham01, [0.5, 0.4], "tt")
    with pytest.raises(SWError):
        exponent_curve(example_source, ham01, [0.4, 0.5], "nope")
    assert "tt" in FAMILIES


@pytest.mark.slow
def test_ordering_chains_random_3x3():
    rng = np.random.default_rng(2024)
    for _ in range(10):
        src, q = random_source(rng, 3, 3), random_metric(rng, 3, 3)
        h = conditional_entropy(src)
        for r in np.linspace(h + 0.05, math.log(3) - 0.02, 3):
            er = exponent_r_gallager(src, r).value
            srs, trs = exponent_std_rc(src, q, r).value, exponent_tt_rc(src, q, r).value
            assert srs <= trs + 1e-6 and trs <= er + 1e-6
            sex, tex = exponent_std_ex(src, q, r).value, exponent_tt_ex(src, q, r).value
            mex, mex_std = matched_ex_tt(src, r).value, matched_ex_std(src, r).value
            assert sex <= tex + 1e-6 and tex <= mex + 1e-6 and mex_std <= mex + 1e-6
