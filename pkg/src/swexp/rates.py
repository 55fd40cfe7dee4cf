"""Achievable-rate thresholds and their GMI / LM-rate counterparts.

``h_q_std`` is the smallest rate at which the standard-ensemble exponent turns
positive; ``h_q_tt`` is the same for the type-by-type ensemble.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ._numerics import logsumexp, seeded_golden_max
from .errors import DimensionMismatch, SWError
from .model import (
    CostFunction,
    DecodingMetric,
    JointSource,
    conditional_entropy,
    entropy,
    source_from_channel,
)

__all__ = ["RateReport", "rate_std", "rate_tt", "gmi", "lm_rate", "rate_report"]

S_LO, S_HI = 1e-4, 1e3
COST_BOUND = 50.0
LOG_CLIP = 1e4
_LOG_GRID = np.linspace(math.log(S_LO), math.log(S_HI), 25)
_LBFGS = {"ftol": 1e-15, "gtol": 1e-11, "maxiter": 3000}


@dataclass(frozen=True)
class RateReport:
    h_xy: float
    h_q_std: float
    h_q_tt: float
    s_star: float
    s_star_tt: float
    a_star: CostFunction
    gmi_crosscheck: float
    lm_crosscheck: float
    gmi_sup_crosscheck: float
    s_at_boundary: bool = False

    def as_dict(self) -> dict:
        return {
            "h_xy": self.h_xy,
            "h_q_std": self.h_q_std,
            "h_q_tt": self.h_q_tt,
            "s_star": self.s_star,
            "s_star_tt": self.s_star_tt,
            "a_star": [float(v) for v in self.a_star.a],
            "gmi_crosscheck": self.gmi_crosscheck,
            "lm_crosscheck": self.lm_crosscheck,
            "gmi_sup_crosscheck": self.gmi_sup_crosscheck,
            "s_at_boundary": self.s_at_boundary,
        }


def _scaled_log(L, s):
    """``s * L`` with ``0 * log 0 = 0``."""
    if s == 0:
        return np.zeros_like(L)
    return s * L


def _supported(source: JointSource, metric: DecodingMetric):
    metric.check_compatible(source)
    sup = source.pmf > 0
    return sup, metric.log_q


def _std_objective(source, L, sup, s):
    """``-sum P log(q^s / sum_xb q(xb,y)^s)``, supported cells only."""
    sL = _scaled_log(L, s)
    col = logsumexp(sL, axis=0)
    terms = col[None, :] - sL
    return float(np.sum(source.pmf[sup] * terms[sup]))


def rate_std(source: JointSource, metric: DecodingMetric):
    """Standard-ensemble threshold ``inf_s -E log(q^s / sum_xb q^s)``.

    Returns ``(value, s_star)``.
    """
    sup, L = _supported(source, metric)
    u, neg = seeded_golden_max(lambda v: -_std_objective(source, L, sup, math.exp(v)), _LOG_GRID)
    best_s, best = math.exp(u), -neg
    at_zero = _std_objective(source, L, sup, 0.0)
    if at_zero < best:
        best_s, best = 0.0, at_zero
    return best, best_s


def _tt_value_grad(theta, pmf, py, px, Lc, sup):
    s, a = theta[0], theta[1:]
    z = a[:, None] + s * Lc
    col = logsumexp(z, axis=0)
    w = np.exp(z - col[None, :])
    terms = col[None, :] - a[:, None] - s * Lc
    val = float(np.sum(pmf[sup] * terms[sup]))
    ds = float(np.sum(py * (w * Lc).sum(axis=0)) - np.sum(pmf[sup] * Lc[sup]))
    da = (w * py[None, :]).sum(axis=1) - px
    return val, np.concatenate([[ds], da])


def _tt_objective(source, L, sup, s, a):
    sL = _scaled_log(L, s)
    z = a[:, None] + sL
    col = logsumexp(z, axis=0)
    terms = col[None, :] - z
    return float(np.sum(source.pmf[sup] * terms[sup]))


def rate_tt(source: JointSource, metric: DecodingMetric):
    """Type-by-type threshold ``inf_{s, a} -E log(e^{a(x)} q^s / sum_xb e^{a(xb)} q(xb,y)^s)``.

    The objective is jointly convex in ``(s, a)``.  Returns
    ``(value, s_star, a_star)`` with ``a_star`` gauge-fixed.
    """
    sup, L = _supported(source, metric)
    X = source.x_size
    Lc = np.maximum(L, -LOG_CLIP)
    pmf, py, px = source.pmf, source.py, source.px
    _, s_std = rate_std(source, metric)
    bounds = [(0.0, S_HI)] + [(-COST_BOUND, COST_BOUND)] * X
    best = None
    for s0 in (s_std, 1.0, 0.1):
        x0 = np.concatenate([[s0], np.zeros(X)])
        res = minimize(_tt_value_grad, x0, args=(pmf, py, px, Lc, sup), jac=True,
                       method="L-BFGS-B", bounds=bounds, options=_LBFGS)
        for theta in (res.x, x0):
            val = _tt_objective(source, L, sup, float(theta[0]), theta[1:])
            if best is None or val < best[0]:
                best = (val, theta.copy())
    val, theta = best
    return val, float(theta[0]), CostFunction(theta[1:])


def _channel_source(px, channel):
    px = np.asarray(px, dtype=float)
    channel = np.atleast_2d(np.asarray(channel, dtype=float))
    if channel.shape[0] != px.shape[0]:
        raise DimensionMismatch("channel rows must match the input alphabet")
    if np.any(channel < 0) or not np.allclose(channel[px > 0].sum(axis=1), 1.0, atol=1e-9):
        raise SWError("channel rows must be probability vectors")
    return source_from_channel(px, channel)


def _gmi_value(source, L, sup, s):
    """``sum P log(q^s / sum_xb P_X(xb) q(xb,y)^s)``."""
    with np.errstate(divide="ignore"):
        logpx = np.log(source.px)
    sL = _scaled_log(L, s)
    col = logsumexp(logpx[:, None] + sL, axis=0)
    terms = sL - col[None, :]
    return float(np.sum(source.pmf[sup] * terms[sup]))


def gmi(px, channel, metric: DecodingMetric) -> float:
    """Generalized mutual information ``sup_{s>0} E log(q^s / E_{P_X} q^s)``."""
    source = _channel_source(px, channel)
    sup, L = _supported(source, metric)
    u, val = seeded_golden_max(lambda v: _gmi_value(source, L, sup, math.exp(v)), _LOG_GRID)
    return max(val, 0.0)


def _lm_value_grad(theta, pmf, py, px, logpx, Lc, sup):
    s, b = theta[0], theta[1:]
    z = logpx[:, None] + b[:, None] + s * Lc
    col = logsumexp(z, axis=0)
    w = np.exp(z - col[None, :])
    terms = s * Lc + b[:, None] - col[None, :]
    val = float(np.sum(pmf[sup] * terms[sup]))
    ds = float(np.sum(pmf[sup] * Lc[sup]) - np.sum(py * (w * Lc).sum(axis=0)))
    db = px - (w * py[None, :]).sum(axis=1)
    return -val, -np.concatenate([[ds], db])


def lm_rate(px, channel, metric: DecodingMetric) -> float:
    """LM rate ``sup_{s>0, b} E log(q^s e^{b(X)} / E_{P_X} q^s e^{b})``."""
    source = _channel_source(px, channel)
    sup, L = _supported(source, metric)
    X = source.x_size
    with np.errstate(divide="ignore"):
        logpx = np.log(source.px)
    Lc = np.maximum(L, -LOG_CLIP)
    bounds = [(0.0, S_HI)] + [(-COST_BOUND, COST_BOUND)] * X
    best = 0.0
    for s0 in (1.0, 0.1, 10.0):
        x0 = np.concatenate([[s0], np.zeros(X)])
        res = minimize(_lm_value_grad, x0, args=(source.pmf, source.py, source.px, logpx, Lc, sup),
                       jac=True, method="L-BFGS-B", bounds=bounds, options=_LBFGS)
        best = max(best, -float(res.fun))
    return best


def rate_report(source: JointSource, metric: DecodingMetric) -> RateReport:
    """All three thresholds plus the GMI and LM cross-checks.

    ``gmi_crosscheck`` is ``H(X) - I`` where ``I`` is the GMI objective of the
    metric ``q(x,y) P_X(x)^{-1/s*}`` evaluated at ``s*``;
    ``gmi_sup_crosscheck`` uses the supremum over s instead, which can only be
    smaller.  ``lm_crosscheck`` is ``H(X)`` minus the LM rate of ``q``.
    """
    h_xy = conditional_entropy(source)
    h_std, s_star = rate_std(source, metric)
    h_tt, s_tt, a_star = rate_tt(source, metric)
    hx = entropy(source.px)
    px = source.px
    W = source.p_y_given_x
    sup, L = _supported(source, metric)

    # q_bar^s* = q^s* / P_X in the log domain, so s* = 0 is harmless; the
    # GMI denominator only runs over x with P_X(x) > 0
    rows = source.support_x
    with np.errstate(divide="ignore"):
        logpx = np.log(px)
    sL = _scaled_log(L, s_star)
    sLbar = sL - np.where(rows, logpx, 0.0)[:, None]
    col = logsumexp(sL[rows], axis=0)
    i_frozen = float(np.sum(source.pmf[sup] * (sLbar - col[None, :])[sup]))
    gmi_frozen = hx - i_frozen

    if s_star > 0:
        scale = np.where(rows, px, 1.0) ** (-1.0 / s_star)
        qbar = DecodingMetric(np.where(rows[:, None], metric.q * scale[:, None], 0.0))
        gmi_sup = hx - gmi(px, W, qbar)
    else:
        gmi_sup = gmi_frozen
    lm_check = hx - lm_rate(px, W, metric)
    return RateReport(
        h_xy=h_xy,
        h_q_std=h_std,
        h_q_tt=h_tt,
        s_star=s_star,
        s_star_tt=s_tt,
        a_star=a_star,
        gmi_crosscheck=gmi_frozen,
        lm_crosscheck=lm_check,
        gmi_sup_crosscheck=gmi_sup,
        s_at_boundary=bool(s_star >= S_HI * (1 - 1e-6) or (0 < s_star <= S_LO * (1 + 1e-6))),
    )
