"""Randomized invariance and ordering properties of the dual exponents."""
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from swexp.dual import (
    exponent_r_gallager,
    exponent_std_ex,
    exponent_std_rc,
    exponent_tt_ex,
    exponent_tt_rc,
    matched_ex_std,
    matched_ex_tt,
    std_ex_objective,
    std_rc_objective,
    tt_ex_objective,
    tt_rc_objective,
)
from swexp.model import DecodingMetric, conditional_entropy

from conftest import random_metric, random_source

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(2, 4)


@given(seed=seeds, xs=sizes, ys=sizes, c=st.floats(-20, 20), rho=st.floats(0.01, 1.0),
       rho_ex=st.floats(1.0, 20.0), s=st.floats(0.0, 3.0))
def test_gauge_invariance(seed, xs, ys, c, rho, rho_ex, s):
    rng = np.random.default_rng(seed)
    src, q = random_source(rng, xs, ys), random_metric(rng, xs, ys)
    a = rng.normal(size=xs)
    assert abs(tt_rc_objective(src, q, rho, s, a + c) - tt_rc_objective(src, q, rho, s, a)) < 1e-12
    assert abs(tt_ex_objective(src, q, rho_ex, s, a + c) - tt_ex_objective(src, q, rho_ex, s, a)) < 1e-12


@given(seed=seeds, xs=sizes, ys=sizes, s=st.floats(0.0, 3.0))
def test_rho_one_identity(seed, xs, ys, s):
    rng = np.random.default_rng(seed)
    src, q = random_source(rng, xs, ys), random_metric(rng, xs, ys)
    a = rng.normal(size=xs)
    assert abs(std_ex_objective(src, q, 1.0, s) - std_rc_objective(src, q, 1.0, s)) < 1e-12
    assert abs(tt_ex_objective(src, q, 1.0, s, a) - tt_rc_objective(src, q, 1.0, s, a)) < 1e-12


@given(seed=seeds, xs=sizes, ys=sizes, tau=st.floats(0.2, 5.0), s=st.floats(0.0, 2.0),
       lam=st.floats(1e-3, 1e3), rho=st.floats(0.05, 1.0))
def test_power_rescales_objectives(seed, xs, ys, tau, s, lam, rho):
    # q -> lam q^tau maps s to s / tau at the objective level
    rng = np.random.default_rng(seed)
    src, q = random_source(rng, xs, ys), random_metric(rng, xs, ys)
    q2 = DecodingMetric(lam * q.q ** tau)
    a = rng.normal(size=xs)
    assert abs(std_rc_objective(src, q2, rho, s / tau) - std_rc_objective(src, q, rho, s)) < 1e-10
    assert abs(tt_rc_objective(src, q2, rho, s / tau, a) - tt_rc_objective(src, q, rho, s, a)) < 1e-10


@settings(max_examples=8)
@given(seed=seeds, tau=st.floats(0.25, 4.0), lam=st.floats(1e-2, 1e2), frac=st.floats(0.1, 0.9))
def test_power_invariance_of_exponents(seed, tau, lam, frac):
    rng = np.random.default_rng(seed)
    src, q = random_source(rng, 3, 3), random_metric(rng, 3, 3)
    q2 = DecodingMetric(lam * q.q ** tau)
    h = conditional_entropy(src)
    r = h + frac * (math.log(3) - h)
    for fn in (exponent_std_rc, exponent_tt_rc, exponent_std_ex, exponent_tt_ex):
        assert abs(fn(src, q, r).value - fn(src, q2, r).value) < 1e-6


@settings(max_examples=10)
@given(seed=seeds, frac=st.floats(0.05, 0.95))
def test_ordering_chains(seed, frac):
    rng = np.random.default_rng(seed)
    src, q = random_source(rng, 3, 3), random_metric(rng, 3, 3)
    h = conditional_entropy(src)
    r = h + frac * (math.log(3) - h)
    er = exponent_r_gallager(src, r).value
    srs, trs = exponent_std_rc(src, q, r).value, exponent_tt_rc(src, q, r).value
    assert srs <= trs + 1e-6 <= er + 2e-6
    sex, tex = exponent_std_ex(src, q, r).value, exponent_tt_ex(src, q, r).value
    mstd, mtt = matched_ex_std(src, r).value, matched_ex_tt(src, r).value
    assert sex <= tex + 1e-6 and tex <= mtt + 1e-6 and mstd <= mtt + 1e-6
